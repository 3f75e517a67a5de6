//! Shared helpers for the CLI integration and acceptance suites: asset
//! loading, deterministic randomness, and definition-level oracles that stay
//! independent of the library's FFT code paths.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use std::path::PathBuf;

use ogstv_cli::pgm;
use ogstv_core::{ImageGrid, Kernel};

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root")
}

/// The bundled natural 256x256 grayscale test photo.
pub fn bundled_image() -> ImageGrid {
    let path = workspace_root().join("assets/camera.pgm");
    pgm::read_image(&path).expect("bundled assets/camera.pgm")
}

/// The canonical cameraman image, if the user supplied one (either at
/// `assets/cameraman.pgm` or via `CAMERAMAN_PGM`).
pub fn cameraman_path() -> Option<PathBuf> {
    if let Ok(p) = std::env::var("CAMERAMAN_PGM") {
        let p = PathBuf::from(p);
        if p.exists() {
            return Some(p);
        }
    }
    let p = workspace_root().join("assets/cameraman.pgm");
    p.exists().then_some(p)
}

pub fn crop(grid: &ImageGrid, row0: usize, col0: usize, side: usize) -> ImageGrid {
    let mut data = Vec::with_capacity(side * side);
    for r in 0..side {
        for c in 0..side {
            data.push(grid.get(row0 + r, col0 + c));
        }
    }
    ImageGrid::from_vec(side, side, data).unwrap()
}

/// Deterministic uniform(-0.5, 0.5) stream.
pub fn lcg(seed: u64) -> impl FnMut() -> f64 {
    let mut state = seed;
    move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

pub fn random_grid(h: usize, w: usize, seed: u64) -> ImageGrid {
    let mut next = lcg(seed);
    ImageGrid::from_vec(h, w, (0..h * w).map(|_| next()).collect()).unwrap()
}

/// Direct spatial-domain circular convolution about the kernel center.
pub fn periodic_convolve(image: &ImageGrid, kernel: &Kernel) -> ImageGrid {
    let (h, w) = (image.height(), image.width());
    let (cr, cc) = kernel.center();
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for a in 0..kernel.height() {
                for b in 0..kernel.width() {
                    let dr = a as isize - cr as isize;
                    let dc = b as isize - cc as isize;
                    let sr = (r as isize - dr).rem_euclid(h as isize) as usize;
                    let sc = (c as isize - dc).rem_euclid(w as isize) as usize;
                    acc += kernel.get(a, b) * image.get(sr, sc);
                }
            }
            out.set(r, c, acc);
        }
    }
    out
}

/// Adjoint of [`periodic_convolve`].
pub fn periodic_correlate(image: &ImageGrid, kernel: &Kernel) -> ImageGrid {
    let (h, w) = (image.height(), image.width());
    let (cr, cc) = kernel.center();
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for a in 0..kernel.height() {
                for b in 0..kernel.width() {
                    let dr = a as isize - cr as isize;
                    let dc = b as isize - cc as isize;
                    let sr = (r as isize + dr).rem_euclid(h as isize) as usize;
                    let sc = (c as isize + dc).rem_euclid(w as isize) as usize;
                    acc += kernel.get(a, b) * image.get(sr, sc);
                }
            }
            out.set(r, c, acc);
        }
    }
    out
}

fn grad_rows_ref(f: &ImageGrid) -> ImageGrid {
    let (h, w) = (f.height(), f.width());
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            out.set(r, c, f.get((r + 1) % h, c) - f.get(r, c));
        }
    }
    out
}

fn grad_cols_ref(f: &ImageGrid) -> ImageGrid {
    let (h, w) = (f.height(), f.width());
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            out.set(r, c, f.get(r, (c + 1) % w) - f.get(r, c));
        }
    }
    out
}

fn grad_rows_adj_ref(p: &ImageGrid) -> ImageGrid {
    let (h, w) = (p.height(), p.width());
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            out.set(r, c, p.get((r + h - 1) % h, c) - p.get(r, c));
        }
    }
    out
}

fn grad_cols_adj_ref(p: &ImageGrid) -> ImageGrid {
    let (h, w) = (p.height(), p.width());
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            out.set(r, c, p.get(r, (c + w - 1) % w) - p.get(r, c));
        }
    }
    out
}

/// Dense assembly of `b1 (Dx*Dx + Dy*Dy) + b2 H*H + b3 I` from the
/// spatial-domain reference operators.
pub fn assemble_normal_matrix(
    kernel: &Kernel,
    h: usize,
    w: usize,
    b1: f64,
    b2: f64,
    b3: f64,
) -> Vec<Vec<f64>> {
    let n = h * w;
    let mut matrix = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut basis = ImageGrid::zeros(h, w).unwrap();
        basis.set(j / w, j % w, 1.0);
        let tv = ImageGrid::axpy(
            1.0,
            &grad_rows_adj_ref(&grad_rows_ref(&basis)),
            &grad_cols_adj_ref(&grad_cols_ref(&basis)),
        )
        .unwrap();
        let hth = periodic_correlate(&periodic_convolve(&basis, kernel), kernel);
        for i in 0..n {
            matrix[i][j] = b1 * tv.data()[i] + b2 * hth.data()[i] + b3 * basis.data()[i];
        }
    }
    matrix
}

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        assert!(diag.abs() > 1e-14, "singular oracle matrix");
        for row in col + 1..n {
            let factor = a[row][col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

/// Quadruple-loop oracle for the squared-majorizer diagonal; both the grid
/// samples and the inverse-root field are zero outside the grid.
pub fn lambda_sq_reference(u: &ImageGrid, k: usize, floor: f64) -> ImageGrid {
    let (h, w) = (u.height() as isize, u.width() as isize);
    let (kl, kr) = (((k - 1) / 2) as isize, (k / 2) as isize);
    let energy = |r: isize, c: isize| -> f64 {
        let mut s = 0.0;
        for k1 in -kl..=kr {
            for k2 in -kl..=kr {
                let (rr, cc) = (r + k1, c + k2);
                if rr >= 0 && rr < h && cc >= 0 && cc < w {
                    let x = u.get(rr as usize, cc as usize);
                    s += x * x;
                }
            }
        }
        s
    };
    let mut out = ImageGrid::zeros(u.height(), u.width()).unwrap();
    for r in 0..h {
        for c in 0..w {
            let mut s = 0.0;
            for i in -kl..=kr {
                for j in -kl..=kr {
                    let (rr, cc) = (r - i, c - j);
                    if rr >= 0 && rr < h && cc >= 0 && cc < w {
                        s += 1.0 / energy(rr, cc).max(floor).sqrt();
                    }
                }
            }
            out.set(r as usize, c as usize, s);
        }
    }
    out
}

/// Window-gathering evaluation of the overlapping-group regularizer.
pub fn group_norm_sum_ref(v: &ImageGrid, k: usize) -> f64 {
    let (h, w) = (v.height() as isize, v.width() as isize);
    let (kl, kr) = (((k - 1) / 2) as isize, (k / 2) as isize);
    let mut total = 0.0;
    for r in 0..h {
        for c in 0..w {
            let mut energy = 0.0;
            for dr in -kl..=kr {
                for dc in -kl..=kr {
                    let (rr, cc) = (r + dr, c + dc);
                    if rr >= 0 && rr < h && cc >= 0 && cc < w {
                        let x = v.get(rr as usize, cc as usize);
                        energy += x * x;
                    }
                }
            }
            total += energy.sqrt();
        }
    }
    total
}
