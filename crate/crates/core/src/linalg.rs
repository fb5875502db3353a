//! Small fixed-size linear algebra, generic over the AD scalar.

use crate::jet::Real;

pub fn det4<S: Real>(m: &[[S; 4]; 4]) -> S {
    let mut det = S::zero();
    // Laplace expansion along the first row over 3x3 cofactors.
    for j in 0..4 {
        let mut sub = [[S::zero(); 3]; 3];
        for (r, row) in m.iter().enumerate().skip(1) {
            let mut cc = 0;
            for (c, &v) in row.iter().enumerate() {
                if c == j {
                    continue;
                }
                sub[r - 1][cc] = v;
                cc += 1;
            }
        }
        let c3 = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1])
            - sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0])
            + sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
        let term = m[0][j] * c3;
        det = if j % 2 == 0 { det + term } else { det - term };
    }
    det
}

/// Inverse of a 4×4 matrix via the adjugate; returns `None` when the primal
/// determinant vanishes.
pub fn inv4<S: Real>(m: &[[S; 4]; 4]) -> Option<[[S; 4]; 4]> {
    let det = det4(m);
    if det.val() == 0.0 {
        return None;
    }
    let inv_det = det.recip();
    let mut out = [[S::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            // cofactor C_ji for the (i,j) entry of the inverse
            let mut sub = [[S::zero(); 3]; 3];
            let mut rr = 0;
            for r in 0..4 {
                if r == j {
                    continue;
                }
                let mut cc = 0;
                for c in 0..4 {
                    if c == i {
                        continue;
                    }
                    sub[rr][cc] = m[r][c];
                    cc += 1;
                }
                rr += 1;
            }
            let c3 = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1])
                - sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0])
                + sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
            let sign = if (i + j) % 2 == 0 { S::one() } else { -S::one() };
            out[i][j] = sign * c3 * inv_det;
        }
    }
    Some(out)
}

/// Inverse of a symmetric positive-definite 3×3 block.
pub fn inv3<S: Real>(m: &[[S; 3]; 3]) -> Option<[[S; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.val() == 0.0 {
        return None;
    }
    let id = det.recip();
    let mut out = [[S::zero(); 3]; 3];
    out[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * id;
    out[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * id;
    out[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * id;
    out[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * id;
    out[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * id;
    out[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * id;
    out[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * id;
    out[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * id;
    out[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * id;
    Some(out)
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite 3×3
/// matrix (used to map sampled physical velocities to chart velocities).
pub fn cholesky3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let mut l = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}
