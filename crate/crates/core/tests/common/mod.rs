//! Shared oracle helpers for integration tests. Everything here is written
//! from the definitions with plain loops, independent of the library's
//! FFT-based code paths.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use ogstv_core::{ImageGrid, Kernel};

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

/// Adjoint of [`periodic_convolve`]: circular correlation about the center.
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

pub fn grad_rows_ref(f: &ImageGrid) -> ImageGrid {
    let (h, w) = (f.height(), f.width());
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            out.set(r, c, f.get((r + 1) % h, c) - f.get(r, c));
        }
    }
    out
}

pub fn grad_cols_ref(f: &ImageGrid) -> ImageGrid {
    let (h, w) = (f.height(), f.width());
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            out.set(r, c, f.get(r, (c + 1) % w) - f.get(r, c));
        }
    }
    out
}

pub fn grad_rows_adj_ref(p: &ImageGrid) -> ImageGrid {
    let (h, w) = (p.height(), p.width());
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            out.set(r, c, p.get((r + h - 1) % h, c) - p.get(r, c));
        }
    }
    out
}

pub fn grad_cols_adj_ref(p: &ImageGrid) -> ImageGrid {
    let (h, w) = (p.height(), p.width());
    let mut out = ImageGrid::zeros(h, w).unwrap();
    for r in 0..h {
        for c in 0..w {
            out.set(r, c, p.get(r, (c + w - 1) % w) - p.get(r, c));
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

/// Dense assembly of `b1 (Dx*Dx + Dy*Dy) + b2 H*H + b3 I` by pushing unit
/// basis images through the spatial-domain reference operators.
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
