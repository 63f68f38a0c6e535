//! Eigenvalues of general real matrices: Parlett-Reinsch balancing,
//! reduction to upper Hessenberg form by stabilized elimination, then the
//! Francis implicit double-shift QR iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

const RADIX: f64 = 2.0;

/// All eigenvalues of a square real matrix, complex conjugate pairs adjacent.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::InvalidInput("eigenvalues of a non-square matrix".into()));
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut a = m.clone();
    balance(&mut a);
    hessenberg(&mut a);
    hessenberg_qr(a)
}

/// Eigenvalues of a matrix that is already upper Hessenberg (entries below
/// the first subdiagonal are ignored). Balancing is applied first.
pub fn hessenberg_eigenvalues(mut h: Matrix) -> Result<Vec<Complex64>> {
    balance(&mut h);
    hessenberg_qr(h)
}

/// In-place diagonal similarity that equalizes row and column norms.
pub fn balance(a: &mut Matrix) {
    let n = a.rows();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let ginv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= ginv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Reduction to upper Hessenberg form by Gaussian elimination with pivoting.
pub fn hessenberg(a: &mut Matrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for m in 1..n - 1 {
        let mut x: f64 = 0.0;
        let mut piv = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                piv = j;
            }
        }
        if piv != m {
            for j in m - 1..n {
                let tmp = a[(piv, j)];
                a[(piv, j)] = a[(m, j)];
                a[(m, j)] = tmp;
            }
            for i in 0..n {
                let tmp = a[(i, piv)];
                a[(i, piv)] = a[(i, m)];
                a[(i, m)] = tmp;
            }
        }
        if x != 0.0 {
            for i in m + 1..n {
                let mut y = a[(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    a[(i, m - 1)] = 0.0;
                    for j in m..n {
                        a[(i, j)] -= y * a[(m, j)];
                    }
                    for j in 0..n {
                        a[(j, m)] += y * a[(j, i)];
                    }
                }
            }
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix.
fn hessenberg_qr(mut a: Matrix) -> Result<Vec<Complex64>> {
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            a[(i, j)] = 0.0;
        }
    }
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }

    // Active block is rows/cols l..=nn; nn is signed so the loop can run to -1.
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    let mut its = 0usize;
    // Iteration budget per eigenvalue, as in LAPACK's dlahqr.
    let max_its = 30 * n.max(10);
    while nn >= 0 {
        let nu = nn as usize;
        // Find a negligible subdiagonal element.
        let mut l = nu;
        while l >= 1 {
            let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
            if s == 0.0 {
                s = anorm;
            }
            if a[(l, l - 1)].abs() + s == s {
                a[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }
        let mut x = a[(nu, nu)];
        if l == nu {
            wr[nu] = x + t;
            wi[nu] = 0.0;
            nn -= 1;
            its = 0;
            continue;
        }
        let mut y = a[(nu - 1, nu - 1)];
        let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
        if l == nu - 1 {
            let p = 0.5 * (y - x);
            let q = p * p + w;
            let mut z = q.abs().sqrt();
            x += t;
            if q >= 0.0 {
                z = p + sign(z, p);
                wr[nu - 1] = x + z;
                wr[nu] = x + z;
                if z != 0.0 {
                    wr[nu] = x - w / z;
                }
                wi[nu - 1] = 0.0;
                wi[nu] = 0.0;
            } else {
                wr[nu - 1] = x + p;
                wr[nu] = x + p;
                wi[nu - 1] = -z;
                wi[nu] = z;
            }
            nn -= 2;
            its = 0;
            continue;
        }

        if its == max_its {
            return Err(Error::NoConvergence(format!(
                "QR iteration stalled after {max_its} sweeps (n = {n})"
            )));
        }
        if its > 0 && its % 10 == 0 {
            // Exceptional shift, alternating between the top and the bottom
            // of the active block to break cycles on structured matrices.
            let (origin, s) = if its % 20 == 10 {
                (a[(l, l)], a[(l + 1, l)].abs() + a[(l + 2, l + 1)].abs())
            } else {
                (x, a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs())
            };
            t += origin;
            for i in 0..=nu {
                a[(i, i)] -= origin;
            }
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        } else {
            // Real shift pair: use the one closer to a[nu][nu] twice. With
            // eigenvalues clustered at +r and -r the pair (+r, -r) makes
            // no progress.
            let half = 0.5 * (y - x);
            let disc = half * half + w;
            if disc >= 0.0 {
                let mid = 0.5 * (x + y);
                let root = disc.sqrt();
                let mu = if (mid + root - x).abs() <= (mid - root - x).abs() {
                    mid + root
                } else {
                    mid - root
                };
                x = mu;
                y = mu;
                w = 0.0;
            }
        }
        its += 1;

        // Look for two consecutive small subdiagonal elements.
        let mut m = nu - 2;
        let (mut p, mut q, mut r);
        loop {
            let z = a[(m, m)];
            let rr = x - z;
            let ss = y - z;
            p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
            q = a[(m + 1, m + 1)] - z - rr - ss;
            r = a[(m + 2, m + 1)];
            let s = p.abs() + q.abs() + r.abs();
            p /= s;
            q /= s;
            r /= s;
            if m == l {
                break;
            }
            let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
            let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
            if u + v == v {
                break;
            }
            m -= 1;
        }
        for i in m + 2..=nu {
            a[(i, i - 2)] = 0.0;
            if i != m + 2 {
                a[(i, i - 3)] = 0.0;
            }
        }

        // Double-shift QR step on rows l..=nn and columns m..=nn.
        let mut k = m;
        while k < nu {
            if k != m {
                p = a[(k, k - 1)];
                q = a[(k + 1, k - 1)];
                r = if k != nu - 1 { a[(k + 2, k - 1)] } else { 0.0 };
                x = p.abs() + q.abs() + r.abs();
                if x != 0.0 {
                    p /= x;
                    q /= x;
                    r /= x;
                }
            }
            let s = sign((p * p + q * q + r * r).sqrt(), p);
            if s != 0.0 {
                if k == m {
                    if l != m {
                        a[(k, k - 1)] = -a[(k, k - 1)];
                    }
                } else {
                    a[(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                    if k != nu - 1 {
                        pp += r * a[(k + 2, j)];
                        a[(k + 2, j)] -= pp * z;
                    }
                    a[(k + 1, j)] -= pp * y;
                    a[(k, j)] -= pp * x;
                }
                let mmin = if nu < k + 3 { nu } else { k + 3 };
                for i in l..=mmin {
                    let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                    if k != nu - 1 {
                        pp += z * a[(i, k + 2)];
                        a[(i, k + 2)] -= pp * r;
                    }
                    a[(i, k + 1)] -= pp * q;
                    a[(i, k)] -= pp;
                }
            }
            k += 1;
        }
    }

    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex64::new(re, im)).collect())
}
