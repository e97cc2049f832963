use super::{ComplexMatrix, Complex64, ZERO};
use crate::error::{LinalgError, Result};

const MAX_SWEEPS: usize = 40;
const OFFDIAG_REL_TOL: f64 = 1e-13;
const HERMITIAN_REL_TOL: f64 = 1e-12;

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; column `k` of `eigenvectors` belongs to
/// `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k]).sum()
        })
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian input.
///
/// The input is symmetrised as `(a + a*)/2` first. Sweeps visit the upper
/// triangle in row-major order, so results are bitwise reproducible. Converges
/// when every off-diagonal modulus is at most `1e-13 ‖a‖_F`.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<Spectrum> {
    let n = a.require_square("hermitian_eig")?;
    let norm = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_REL_TOL * norm {
        return Err(LinalgError::domain(
            "hermitian_eig",
            format!("input is not Hermitian: ‖a − a*‖_F = {defect:e}, ‖a‖_F = {norm:e}"),
        ));
    }

    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFFDIAG_REL_TOL * norm;

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if max_offdiag(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            op: "hermitian_eig",
            sweeps: MAX_SWEEPS,
            residual: max_offdiag(&m),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn max_offdiag(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut best = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

/// Annihilates `m[p, q]` with the unitary `U = D R D*`, where `D` strips the
/// phase of `m[p, q]` and `R` is the classical real Jacobi rotation.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let z = m[(p, q)];
    let r = z.norm();
    if r == 0.0 {
        return;
    }
    let phase = z / r;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let s_ph = phase * s; // s e^{iφ}
    let s_ph_conj = s_ph.conj(); // s e^{-iφ}
    let n = m.rows();

    for k in 0..n {
        let kp = m[(k, p)];
        let kq = m[(k, q)];
        m[(k, p)] = kp * c - s_ph_conj * kq;
        m[(k, q)] = s_ph * kp + kq * c;
    }
    for k in 0..n {
        let pk = m[(p, k)];
        let qk = m[(q, k)];
        m[(p, k)] = pk * c - s_ph * qk;
        m[(q, k)] = s_ph_conj * pk + qk * c;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::new(app - t * r, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * r, 0.0);

    for k in 0..n {
        let kp = v[(k, p)];
        let kq = v[(k, q)];
        v[(k, p)] = kp * c - s_ph_conj * kq;
        v[(k, q)] = s_ph * kp + kq * c;
    }
}

const SQRT_REJECT_REL: f64 = 1e-6;

/// Positive semidefinite square root `V Λ^{1/2} V*`.
///
/// Eigenvalues down to `−1e-6 max(1, λ_max)` are clipped to zero; anything more
/// negative is a domain error.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(a)?;
    let scale = spec.lambda_max().max(1.0);
    let lmin = spec.lambda_min();
    if lmin < -SQRT_REJECT_REL * scale {
        return Err(LinalgError::domain(
            "psd_sqrt",
            format!("matrix is indefinite: λ_min = {lmin:e}, λ_max = {:e}", spec.lambda_max()),
        ));
    }
    Ok(spec.apply(|l| l.max(0.0).sqrt()))
}

/// Singular values, descending.
///
/// Computed as the top half of the spectrum of the Hermitian dilation
/// `[[0, a], [a*, 0]]`, whose eigenvalues are `±s_i(a)`. This keeps absolute
/// accuracy near `ε‖a‖` for small singular values, where `sqrt(eig(a*a))`
/// would only reach `sqrt(ε)‖a‖`.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.require_square("singular_values")?;
    let mut dil = ComplexMatrix::zeros(2 * n, 2 * n);
    dil.set_submatrix(0, n, a);
    dil.set_submatrix(n, 0, &a.adjoint());
    let spec = hermitian_eig(&dil)?;
    Ok(spec.eigenvalues[..n].iter().map(|&s| s.max(0.0)).collect())
}

/// Schatten `q`-norm; `q = f64::INFINITY` gives the spectral norm.
pub fn schatten_norm(a: &ComplexMatrix, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(LinalgError::domain("schatten_norm", format!("q = {q} is below 1")));
    }
    let s = singular_values(a)?;
    if q.is_infinite() {
        return Ok(s.first().copied().unwrap_or(0.0));
    }
    if q == 1.0 {
        return Ok(s.iter().sum());
    }
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0.0);
    }
    // factor out s_1 so large q does not overflow
    Ok(top * s.iter().map(|&x| (x / top).powf(q)).sum::<f64>().powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::test_support::*;
    use crate::matkernel::{matmul, ONE};

    fn residual_ok(a: &ComplexMatrix, spec: &Spectrum, tol: f64) {
        let n = a.rows();
        let scale = a.frobenius_norm().max(1.0);
        for k in 0..n {
            let vk = spec.eigenvectors.submatrix(0, k, n, 1);
            let av = matmul(a, &vk).unwrap();
            let res = (&av - &vk.scale_real(spec.eigenvalues[k])).frobenius_norm();
            assert!(res <= tol * scale, "pair {k}: residual {res:e}");
        }
    }

    #[test]
    fn identity_spectrum() {
        let s = hermitian_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn known_two_by_two() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let s = hermitian_eig(&a).unwrap();
        assert!((s.eigenvalues[0] - 3.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
        residual_ok(&a, &s, 1e-13);
    }

    #[test]
    fn complex_off_diagonal() {
        // [[1, i], [-i, 1]] has eigenvalues 2 and 0
        let a = ComplexMatrix::new(2, 2, vec![ONE, Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), ONE])
            .unwrap();
        let s = hermitian_eig(&a).unwrap();
        assert!((s.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!(s.eigenvalues[1].abs() < 1e-14);
        residual_ok(&a, &s, 1e-13);
    }

    #[test]
    fn random_hermitian_residuals_and_unitarity() {
        let mut r = rng(21);
        for n in 1..=12 {
            for _ in 0..5 {
                let a = hermitian(n, &mut r);
                let s = hermitian_eig(&a).unwrap();
                residual_ok(&a, &s, 1e-10);
                let v = &s.eigenvectors;
                let defect = (&matmul(&v.adjoint(), v).unwrap() - &ComplexMatrix::identity(n)).frobenius_norm();
                assert!(defect <= 1e-10);
                assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn reconstruction() {
        let mut r = rng(22);
        let a = hermitian(7, &mut r);
        let s = hermitian_eig(&a).unwrap();
        let back = s.apply(|l| l);
        assert!((&back - &a).frobenius_norm() <= 1e-10 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let mut r = rng(23);
        assert!(matches!(hermitian_eig(&gaussian(3, 3, &mut r)), Err(LinalgError::Domain { .. })));
        assert!(matches!(hermitian_eig(&ComplexMatrix::zeros(2, 3)), Err(LinalgError::Dimension { .. })));
    }

    #[test]
    fn zero_matrix() {
        let s = hermitian_eig(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0; 4]);
    }

    #[test]
    fn sqrt_cases() {
        assert_eq!(psd_sqrt(&ComplexMatrix::identity(3)).unwrap(), ComplexMatrix::identity(3));
        let r = psd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 9.0])).unwrap();
        assert!(rel_diff(&r, &ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-15);

        let mut g = rng(24);
        for _ in 0..20 {
            let a = gram(5, &mut g);
            let root = psd_sqrt(&a).unwrap();
            assert!(root.hermitian_defect() <= 1e-12 * root.frobenius_norm());
            assert!(rel_diff(&matmul(&root, &root).unwrap(), &a) <= 1e-9);
        }
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let err = psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -1.0])).unwrap_err();
        assert!(matches!(err, LinalgError::Domain { .. }));
        // round-off sized negatives are clipped
        let ok = psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -1e-12])).unwrap();
        assert_eq!(ok[(1, 1)], ZERO);
    }

    #[test]
    fn singular_value_cases() {
        assert_eq!(singular_values(&ComplexMatrix::identity(3)).unwrap(), vec![1.0; 3]);
        let d = ComplexMatrix::from_diag(&[Complex64::new(-3.0, 0.0), Complex64::new(0.0, 2.0)]);
        let s = singular_values(&d).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14);
        assert!(singular_values(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn singular_values_frobenius_and_adjoint() {
        let mut r = rng(25);
        for _ in 0..20 {
            let a = gaussian(6, 6, &mut r);
            let s = singular_values(&a).unwrap();
            let sum_sq: f64 = s.iter().map(|x| x * x).sum();
            let fro = a.frobenius_norm().powi(2);
            assert!((sum_sq - fro).abs() <= 1e-9 * fro);
            let sa = singular_values(&a.adjoint()).unwrap();
            for (x, y) in s.iter().zip(&sa) {
                assert!((x - y).abs() <= 1e-10 * s[0]);
            }
        }
    }

    #[test]
    fn schatten_cases() {
        assert!((schatten_norm(&ComplexMatrix::identity(4), 1.0).unwrap() - 4.0).abs() < 1e-14);
        let d = ComplexMatrix::from_real_diag(&[1.0, 2.0, 3.0, 4.0]);
        assert!((schatten_norm(&d, f64::INFINITY).unwrap() - 4.0).abs() < 1e-14);
        let mut r = rng(26);
        let a = gaussian(5, 5, &mut r);
        let two = schatten_norm(&a, 2.0).unwrap();
        assert!((two - a.frobenius_norm()).abs() <= 1e-10 * two);
        assert!(schatten_norm(&a, 0.5).is_err());
        assert!(schatten_norm(&a, f64::NAN).is_err());
    }
}
