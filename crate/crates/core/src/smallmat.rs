//! Dense complex matrices for the handful of tiny dimensions the model needs
//! (2, 4 and 8 for states, up to 64 for scratch products).
//!
//! Eigenvalues of general matrices go through balancing, Householder
//! reduction to Hessenberg form and a single-shift complex QR iteration.
//! Hermitian spectra use cyclic Jacobi rotations, which keep exact zeros
//! exact and deliver small eigenvalues with absolute accuracy near machine
//! epsilon.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension accepted anywhere in this module.
pub const MAX_DIM: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square, row-major, dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0 && dim <= MAX_DIM, "matrix dimension {dim} out of range");
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; the length must be a perfect square.
    pub fn from_row_major(data: Vec<Complex64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::InvalidParameter { name: "data", reason: format!("{} entries do not form a square matrix", data.len()) });
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow(dim));
        }
        Ok(Self { dim, data })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Pauli σ_y in the {|e⟩, |g⟩} ordering: [[0, -i], [i, 0]].
    pub fn pauli_y() -> Self {
        let mut m = Self::zeros(2);
        m[(0, 1)] = Complex64::new(0.0, -1.0);
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    /// Element-wise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `m - m†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rhs.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; the left factor carries the most significant index.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        let n = self.dim * rhs.dim;
        if n > MAX_DIM {
            return Err(Error::DimensionOverflow(n));
        }
        let m = rhs.dim;
        Ok(Self::from_fn(n, |r, c| self[(r / m, c / m)] * rhs[(r % m, c % m)]))
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = ONE;
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm())).unwrap_or(k);
            if a[piv * n + k] == ZERO {
                return ZERO;
            }
            if piv != k {
                for c in 0..n {
                    a.swap(k * n + c, piv * n + c);
                }
                det = -det;
            }
            let p = a[k * n + k];
            det *= p;
            for i in k + 1..n {
                let f = a[i * n + k] / p;
                if f == ZERO {
                    continue;
                }
                for c in k..n {
                    let v = a[k * n + c];
                    a[i * n + c] -= f * v;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.frobenius_norm();
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm())).unwrap_or(k);
            if a[(piv, k)].norm() <= f64::EPSILON * scale {
                return Err(Error::InvalidParameter { name: "matrix", reason: "singular to working precision".into() });
            }
            if piv != k {
                for c in 0..n {
                    a.data.swap(k * n + c, piv * n + c);
                    inv.data.swap(k * n + c, piv * n + c);
                }
            }
            let p = a[(k, k)].inv();
            for c in 0..n {
                a[(k, c)] *= p;
                inv[(k, c)] *= p;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[(i, k)];
                if f == ZERO {
                    continue;
                }
                for c in 0..n {
                    let (ak, ik) = (a[(k, c)], inv[(k, c)]);
                    a[(i, c)] -= f * ak;
                    inv[(i, c)] -= f * ik;
                }
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Orders eigenvalues by descending real part, then descending magnitude.
/// The sort is stable, so exact ties keep the order in which they were found.
pub fn sort_descending(values: &mut [Complex64]) {
    values.sort_by(|a, b| match b.re.total_cmp(&a.re) {
        Ordering::Equal => b.norm().total_cmp(&a.norm()),
        ord => ord,
    });
}

/// Eigenvalues of a general (non-Hermitian) complex matrix, sorted by
/// [`sort_descending`].
pub fn eigenvalues_general(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = m.dim();
    if n > 8 {
        return Err(Error::DimensionOverflow(n));
    }
    let mut a = m.clone();
    balance(&mut a);
    reduce_to_hessenberg(&mut a);
    let mut values = hessenberg_qr(&mut a)?;
    sort_descending(&mut values);
    Ok(values)
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity scaling by powers of two (Parlett-Reinsch).
fn balance(a: &mut ComplexMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.dim();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
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
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn reduce_to_hessenberg(a: &mut ComplexMatrix) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // A <- (I - 2vv†) A
        for c in 0..n {
            let mut dot = ZERO;
            for (i, vi) in v.iter().enumerate() {
                dot += vi.conj() * a[(k + 1 + i, c)];
            }
            dot *= 2.0;
            for (i, vi) in v.iter().enumerate() {
                a[(k + 1 + i, c)] -= vi * dot;
            }
        }
        // A <- A (I - 2vv†)
        for r in 0..n {
            let mut dot = ZERO;
            for (i, vi) in v.iter().enumerate() {
                dot += a[(r, k + 1 + i)] * vi;
            }
            dot *= 2.0;
            for (i, vi) in v.iter().enumerate() {
                a[(r, k + 1 + i)] -= dot * vi.conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Eigenvalues of the 2x2 block [[a, b], [c, d]].
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let s = abs1(a) + abs1(b) + abs1(c) + abs1(d);
    if s == 0.0 {
        return (ZERO, ZERO);
    }
    let (a, b, c, d) = (a / s, b / s, c / s, d / s);
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let root = (half_diff * half_diff + b * c).sqrt();
    let (l1, l2) = (half_tr + root, half_tr - root);
    // Recover the smaller root from the determinant to avoid cancellation.
    let det = a * d - b * c;
    let (big, small) = if l1.norm() >= l2.norm() { (l1, l2) } else { (l2, l1) };
    let small = if big != ZERO { det / big } else { small };
    (big * s, small * s)
}

/// Single-shift complex QR iteration on an upper Hessenberg matrix.
fn hessenberg_qr(h: &mut ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let eps = f64::EPSILON;
    let budget = 60 * n.max(1);
    let hnorm = h.frobenius_norm();
    let mut values = Vec::with_capacity(n);
    let mut hi = n;
    let mut its = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        if hi == 1 {
            values.push(h[(0, 0)]);
            break;
        }
        // locate the start of the unreduced trailing block
        let mut lo = hi - 1;
        while lo > 0 {
            let s = abs1(h[(lo, lo)]) + abs1(h[(lo - 1, lo - 1)]);
            let s = if s == 0.0 { hnorm } else { s };
            if abs1(h[(lo, lo - 1)]) <= eps * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            values.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            its = 0;
            continue;
        }
        if lo == hi - 2 {
            let (e1, e2) = eig2(h[(lo, lo)], h[(lo, lo + 1)], h[(lo + 1, lo)], h[(lo + 1, lo + 1)]);
            values.push(e1);
            values.push(e2);
            hi -= 2;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if total > budget {
            return Err(Error::NoConvergence { algorithm: "Hessenberg QR", iterations: total });
        }
        let d = h[(hi - 1, hi - 1)];
        let shift = if its.is_multiple_of(10) {
            // exceptional shift to break cycles
            d + 0.75 * abs1(h[(hi - 1, hi - 2)])
        } else {
            let (e1, e2) = eig2(h[(hi - 2, hi - 2)], h[(hi - 2, hi - 1)], h[(hi - 1, hi - 2)], d);
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };
        for i in lo..hi {
            h[(i, i)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let (a, b) = (h[(k, k)], h[(k + 1, k)]);
            let nu = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if nu == 0.0 {
                (1.0, ZERO)
            } else if a == ZERO {
                (0.0, ONE)
            } else {
                let an = a.norm();
                (an / nu, (a / an) * b.conj() / nu)
            };
            for j in k..hi {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..=(k + 1).min(hi - 1) {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + s.conj() * y;
                h[(i, k + 1)] = -s * x + y * c;
            }
        }
        for i in lo..hi {
            h[(i, i)] += shift;
        }
    }
    Ok(values)
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching orthonormal
/// eigenvectors as the columns of the second value.
pub fn eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.dim();
    let scale = m.frobenius_norm();
    let defect = m.hermiticity_defect();
    if defect > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonHermitian(defect));
    }
    // symmetrize so rounding in the input cannot leak into the rotations
    let mut a = ComplexMatrix::from_fn(n, |r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    const MAX_SWEEPS: usize = 100;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c))).map(|(r, c)| a[(r, c)].norm_sqr()).sum();
        if off <= (f64::EPSILON * scale).powi(2) {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 || mag <= 1e-3 * f64::EPSILON * scale {
                    continue;
                }
                let phase = apq / mag;
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau.is_finite() { tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt()) } else { 0.0 };
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = diag(1, phase*) composed with the real rotation [[c, s], [-s, c]]
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * c + y * u_qp;
                    a[(k, q)] = x * s + y * u_qq;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = x * c + y * u_qp.conj();
                    a[(q, k)] = x * s + y * u_qq.conj();
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * c + y * u_qp;
                    v[(k, q)] = x * s + y * u_qq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { algorithm: "Hermitian Jacobi", iterations: MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Real spectrum of a Hermitian matrix, descending.
pub fn eigenvalues_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eigh(m).map(|(values, _)| values)
}

/// Singular values, descending, via the Hermitian dilation [[0, M], [M†, 0]].
///
/// The dilation's spectrum is {±σ_i}, so the singular values inherit the
/// absolute accuracy of the Jacobi solver instead of the square-root loss of
/// going through M†M.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if 2 * n > MAX_DIM {
        return Err(Error::DimensionOverflow(2 * n));
    }
    let dilation = ComplexMatrix::from_fn(2 * n, |r, c| match (r < n, c < n) {
        (true, false) => m[(r, c - n)],
        (false, true) => m[(c, r - n)].conj(),
        _ => ZERO,
    });
    let values = eigenvalues_hermitian(&dilation)?;
    Ok(values.into_iter().take(n).map(|s| s.max(0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let a = random_matrix(rng, n);
        &a + &a.adjoint()
    }

    /// Matches each expected value to a distinct computed one.
    fn assert_same_multiset(found: &[Complex64], expected: &[Complex64], tol: f64) {
        assert_eq!(found.len(), expected.len());
        let mut used = vec![false; found.len()];
        for e in expected {
            let (idx, dist) = found
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, f)| (i, (f - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(dist < tol, "eigenvalue {e} missing (closest at distance {dist:e}) in {found:?}");
            used[idx] = true;
        }
    }

    #[test]
    fn identity_spectrum() {
        let values = eigenvalues_general(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(values, vec![ONE; 4]);
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let d = [c(3.0, 0.0), c(1.0, 2.0), ZERO, c(-1.0, 0.0)];
        let values = eigenvalues_general(&ComplexMatrix::from_diagonal(&d)).unwrap();
        assert_same_multiset(&values, &d, 1e-14);
        assert_eq!(values[0], c(3.0, 0.0));
        assert_eq!(values[3], c(-1.0, 0.0));
    }

    #[test]
    fn sort_breaks_real_ties_by_magnitude() {
        let mut v = vec![c(1.0, 0.0), c(1.0, 3.0), c(2.0, 0.0)];
        sort_descending(&mut v);
        assert_eq!(v, vec![c(2.0, 0.0), c(1.0, 3.0), c(1.0, 0.0)]);
    }

    #[test]
    fn similarity_transform_recovers_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3, 4, 6, 8] {
            for _ in 0..20 {
                let d: Vec<Complex64> = (0..n).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
                let s = &random_matrix(&mut rng, n) + &ComplexMatrix::identity(n).scale(c(2.0, 0.0));
                let m = &(&s * &ComplexMatrix::from_diagonal(&d)) * &s.inverse().unwrap();
                let values = eigenvalues_general(&m).unwrap();
                assert_same_multiset(&values, &d, 1e-8);
            }
        }
    }

    #[test]
    fn characteristic_residual_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 4, 8] {
            for _ in 0..20 {
                let m = random_matrix(&mut rng, n);
                let norm = m.frobenius_norm();
                for lam in eigenvalues_general(&m).unwrap() {
                    let shifted = &m - &ComplexMatrix::identity(n).scale(lam);
                    assert!(shifted.determinant().norm() < 1e-8 * norm.powi(n as i32));
                }
            }
        }
    }

    #[test]
    fn trace_and_determinant_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 3, 4, 5, 8] {
            for _ in 0..25 {
                let m = random_matrix(&mut rng, n);
                let values = eigenvalues_general(&m).unwrap();
                let sum: Complex64 = values.iter().sum();
                let prod: Complex64 = values.iter().product();
                let tr = m.trace();
                let det = m.determinant();
                assert!((sum - tr).norm() <= 1e-10 * tr.norm().max(1.0));
                assert!((prod - det).norm() <= 1e-8 * det.norm().max(1.0));
            }
        }
    }

    #[test]
    fn defective_and_nilpotent_inputs_converge() {
        // Jordan block and a strictly upper-triangular matrix
        let mut j = ComplexMatrix::identity(4).scale(c(0.5, 0.0));
        for i in 0..3 {
            j[(i, i + 1)] = ONE;
        }
        let values = eigenvalues_general(&j).unwrap();
        for v in values {
            assert!((v - c(0.5, 0.0)).norm() < 1e-3);
        }
        let mut shift = ComplexMatrix::zeros(8);
        for i in 0..7 {
            shift[(i + 1, i)] = ONE;
        }
        shift[(0, 7)] = ONE;
        // cyclic permutation: eighth roots of unity
        let values = eigenvalues_general(&shift).unwrap();
        let roots: Vec<Complex64> = (0..8).map(|k| Complex64::from_polar(1.0, std::f64::consts::PI * k as f64 / 4.0)).collect();
        assert_same_multiset(&values, &roots, 1e-10);
    }

    #[test]
    fn rejects_oversized_general_input() {
        assert!(matches!(eigenvalues_general(&ComplexMatrix::identity(9)), Err(Error::DimensionOverflow(9))));
    }

    #[test]
    fn pauli_y_spectrum() {
        let values = eigenvalues_hermitian(&ComplexMatrix::pauli_y()).unwrap();
        assert_abs_diff_eq!(values[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(values[1], -1.0, epsilon = 1e-15);
    }

    #[test]
    fn rank_one_projector_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi: Vec<Complex64> = (0..8).map(|_| c(rng.gen(), rng.gen())).collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let proj = ComplexMatrix::from_fn(8, |r, cc| psi[r] * psi[cc].conj() / (norm * norm));
        let values = eigenvalues_hermitian(&proj).unwrap();
        assert_abs_diff_eq!(values[0], 1.0, epsilon = 1e-14);
        for v in &values[1..] {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn hermitian_solver_rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = ONE;
        assert!(matches!(eigenvalues_hermitian(&m), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn hermitian_agrees_with_general_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [2, 4, 8] {
            for _ in 0..20 {
                let h = random_hermitian(&mut rng, n);
                let herm = eigenvalues_hermitian(&h).unwrap();
                let general = eigenvalues_general(&h).unwrap();
                for (a, b) in herm.iter().zip(&general) {
                    assert!((b - a).norm() < 1e-9, "{a} vs {b}");
                }
                let tr = h.trace().re;
                assert!((herm.iter().sum::<f64>() - tr).abs() < 1e-10 * tr.abs().max(1.0));
            }
        }
    }

    #[test]
    fn eigh_reconstructs_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = random_hermitian(&mut rng, 8);
        let (values, v) = eigh(&h).unwrap();
        let d = ComplexMatrix::from_diagonal(&values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
        let rebuilt = &(&v * &d) * &v.adjoint();
        assert!(rebuilt.max_abs_diff(&h) < 1e-12);
        assert!((&v.adjoint() * &v).max_abs_diff(&ComplexMatrix::identity(8)) < 1e-13);
    }

    #[test]
    fn singular_values_of_known_matrix() {
        // U diag(3, 1e-12, 0) V† keeps its tiny singular values to absolute precision
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let (_, u) = eigh(&random_hermitian(&mut rng, 3)).unwrap();
        let (_, v) = eigh(&random_hermitian(&mut rng, 3)).unwrap();
        let s = ComplexMatrix::from_diagonal(&[c(3.0, 0.0), c(1e-12, 0.0), ZERO]);
        let m = &(&u * &s) * &v.adjoint();
        let sv = singular_values(&m).unwrap();
        assert_abs_diff_eq!(sv[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sv[1], 1e-12, epsilon = 1e-14);
        assert_abs_diff_eq!(sv[2], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), ComplexMatrix::identity(4));

        let yy = ComplexMatrix::pauli_y().kron(&ComplexMatrix::pauli_y()).unwrap();
        // anti-diagonal read from the top-right corner downwards
        let anti: Vec<Complex64> = (0..4).map(|r| yy[(r, 3 - r)]).collect();
        assert_eq!(anti, vec![c(-1.0, 0.0), ONE, ONE, c(-1.0, 0.0)]);
        let off_anti = (0..4).flat_map(|r| (0..4).map(move |cc| (r, cc))).filter(|&(r, cc)| r + cc != 3).all(|(r, cc)| yy[(r, cc)] == ZERO);
        assert!(off_anti);
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let (a, b, cc, d) =
                (random_matrix(&mut rng, 2), random_matrix(&mut rng, 2), random_matrix(&mut rng, 2), random_matrix(&mut rng, 2));
            let lhs = &a.kron(&b).unwrap() * &cc.kron(&d).unwrap();
            let rhs = (&a * &cc).kron(&(&b * &d)).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn kron_dimension_overflow() {
        let big = ComplexMatrix::identity(16);
        assert!(matches!(big.kron(&ComplexMatrix::identity(8)), Err(Error::DimensionOverflow(128))));
    }
}
