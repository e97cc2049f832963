use super::{ComplexMatrix, Complex64, ONE, ZERO};
use crate::error::Result;

/// Pivot columns whose largest modulus is below this are treated as exactly singular.
const SINGULAR_PIVOT: f64 = 1e-300;

/// Determinant through LU factorisation with partial pivoting on the entry of
/// largest modulus. Valid for arbitrary (non-Hermitian) square input.
pub fn lu_det(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.require_square("lu_det")?;
    let mut lu = a.clone();
    let mut det = ONE;

    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax < SINGULAR_PIVOT {
            return Ok(ZERO);
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            det = -det;
        }
        let pivot = lu[(k, k)];
        det *= pivot;
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            if factor == ZERO {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= factor * u;
            }
        }
    }
    Ok(det)
}
