//! Coordinate exterior derivative and Schouten–Nijenhuis bracket on a
//! chart of arbitrary dimension, acting on component fields evaluated as
//! first-order jets at a point.

use crate::jet::Jet1;
use crate::scale::ScaleDim;
use crate::tensor::{alt, multi_indices, Components, Variance};

/// Component jets of a tensor field at one point: values plus first
/// partials with respect to all chart coordinates.
#[derive(Clone)]
pub struct JetField {
    pub dim: usize,
    pub shape: Vec<usize>,
    pub data: Vec<Jet1>,
    pub scale: ScaleDim,
}

impl JetField {
    pub fn zeros(dim: usize, rank: usize, scale: ScaleDim) -> JetField {
        let len = dim.pow(rank as u32).max(1);
        JetField {
            dim,
            shape: vec![dim; rank],
            data: vec![Jet1::constant(dim, 0.0); len],
            scale,
        }
    }

    /// Component field whose axes need not span the whole chart (e.g. a
    /// horizontal form over the tangent chart: shape [4; r], dim 8).
    pub fn zeros_shaped(dim: usize, shape: Vec<usize>, scale: ScaleDim) -> JetField {
        let len = shape.iter().product::<usize>().max(1);
        JetField {
            dim,
            shape,
            data: vec![Jet1::constant(dim, 0.0); len],
            scale,
        }
    }

    fn flat(&self, idx: &[usize]) -> usize {
        let mut f = 0;
        for (ax, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.shape[ax]);
            f = f * self.shape[ax] + i;
        }
        f
    }

    pub fn get(&self, idx: &[usize]) -> Jet1 {
        self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Jet1) {
        let f = self.flat(idx);
        self.data[f] = v;
    }

    /// Plain values as a component array.
    pub fn values(&self, variance: Variance) -> Components {
        Components {
            shape: self.shape.clone(),
            variance: vec![variance; self.shape.len()],
            data: self.data.iter().map(|j| j.v).collect(),
            scale: self.scale,
        }
    }
}

/// Exterior derivative of an antisymmetric p-form field:
/// (dA)_{a₀…a_p} = Σ_j (−1)^j ∂_{a_j} A_{a₀…â_j…a_p}.
pub fn exterior_derivative(f: &JetField) -> Components {
    let p = f.shape.len();
    let n = f.dim;
    let mut out = Components::zeros(vec![n; p + 1], vec![Variance::Co; p + 1], f.scale);
    let out_shape = out.shape.clone();
    let mut rest = vec![0usize; p];
    for idx in multi_indices(&out_shape) {
        let mut acc = 0.0;
        for j in 0..=p {
            let mut r = 0;
            for (k, &i) in idx.iter().enumerate() {
                if k == j {
                    continue;
                }
                rest[r] = i;
                r += 1;
            }
            let d = f.get(&rest).d[idx[j]];
            acc += if j % 2 == 0 { d } else { -d };
        }
        out.set(&idx, acc);
    }
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).product::<usize>() as f64
}

/// P∘Q composition entering the Schouten bracket:
/// C·alt( P^{l i₁…i_{p−1}} ∂_l Q^{i_p…i_{p+q−1}} ), C = (p+q−1)!/((p−1)!·q!).
fn compose(p: &JetField, q: &JetField) -> Components {
    let dp = p.shape.len();
    let dq = q.shape.len();
    let n = p.dim;
    let rank = dp + dq - 1;
    let mut u = Components::zeros(vec![n; rank], vec![Variance::Contra; rank], p.scale + q.scale);
    let u_shape = u.shape.clone();
    let mut ip = vec![0usize; dp];
    let mut iq = vec![0usize; dq];
    for idx in multi_indices(&u_shape) {
        let mut acc = 0.0;
        for l in 0..n {
            ip[0] = l;
            ip[1..dp].copy_from_slice(&idx[..dp - 1]);
            iq.copy_from_slice(&idx[dp - 1..]);
            acc += p.get(&ip).v * q.get(&iq).d[l];
        }
        u.set(&idx, acc);
    }
    let c = factorial(rank) / (factorial(dp - 1) * factorial(dq));
    alt(&u).expect("alt in schouten").scaled(c)
}

/// Schouten–Nijenhuis bracket of multivector fields of degrees p, q ≥ 1,
/// in the normalization with graded antisymmetry
/// [P,Q] = −(−1)^{pq}[Q,P]: reduces to the Lie bracket for p = q = 1 and
/// to L_P Q for p = 1; Poisson means [Λ,Λ] = 0 and a Jacobi pair satisfies
/// [E,Λ] = 0, [Λ,Λ] = −2 E∧Λ. Concretely
/// [P,Q] = (−1)^{(p−1)(q−1)}·[(−1)^{p−1}·P∘Q − (−1)^{p(q−1)}·Q∘P].
pub fn schouten(p: &JetField, q: &JetField) -> Components {
    let dp = p.shape.len();
    let dq = q.shape.len();
    assert!(dp >= 1 && dq >= 1, "schouten needs degrees >= 1");
    assert_eq!(p.dim, q.dim);
    let pq = compose(p, q);
    let qp = compose(q, p);
    let s1 = if (dp - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let s2 = -(if (dp * (dq - 1)) % 2 == 0 { 1.0 } else { -1.0 });
    let conv = if ((dp - 1) * (dq - 1)) % 2 == 0 { 1.0 } else { -1.0 };
    pq.scaled(s1 * conv)
        .add_unscaled(&qp.scaled(s2 * conv))
        .expect("schouten shape agreement")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{seed2, Real};

    /// Build the jet field of a closed-form vector field on a 3-chart.
    fn vector_field(
        x: &[f64],
        comp: impl Fn(&[crate::jet::Jet2]) -> Vec<crate::jet::Jet2>,
    ) -> JetField {
        let xs = seed2(x);
        let vals = comp(&xs);
        let mut f = JetField::zeros(x.len(), 1, ScaleDim::DIMENSIONLESS);
        for (i, v) in vals.into_iter().enumerate() {
            f.set(&[i], v.lower());
        }
        f
    }

    #[test]
    fn schouten_of_vectors_is_lie_bracket() {
        use crate::jet::Jet2;
        let x = [0.3, -0.7, 1.1];
        // X = (y², x·z, 1), Y = (z, −x, x·y)
        let xf = vector_field(&x, |s| vec![s[1] * s[1], s[0] * s[2], Jet2::from_f64(1.0)]);
        let yf = vector_field(&x, |s| vec![s[2], -s[0], s[0] * s[1]]);
        let br = schouten(&xf, &yf);
        // Lie bracket by hand: [X,Y]^i = X^l ∂_l Y^i − Y^l ∂_l X^i
        let (x0, x1, x2) = (x[0], x[1], x[2]);
        let xval = [x1 * x1, x0 * x2, 1.0];
        let yval = [x2, -x0, x0 * x1];
        let dxf = [[0.0, 2.0 * x1, 0.0], [x2, 0.0, x0], [0.0, 0.0, 0.0]];
        let dyf = [[0.0, 0.0, 1.0], [-1.0, 0.0, 0.0], [x1, x0, 0.0]];
        for i in 0..3 {
            let mut e = 0.0;
            for l in 0..3 {
                e += xval[l] * dyf[i][l] - yval[l] * dxf[i][l];
            }
            assert!((br.get(&[i]) - e).abs() < 1e-13, "{} vs {e}", br.get(&[i]));
        }
    }

    #[test]
    fn constant_vector_fields_commute() {
        let x = [0.1, 0.2, 0.5];
        let xf = vector_field(&x, |_| {
            vec![
                crate::jet::Jet2::from_f64(1.0),
                crate::jet::Jet2::from_f64(-2.0),
                crate::jet::Jet2::from_f64(0.3),
            ]
        });
        let yf = vector_field(&x, |_| {
            vec![
                crate::jet::Jet2::from_f64(0.4),
                crate::jet::Jet2::from_f64(1.0),
                crate::jet::Jet2::from_f64(2.0),
            ]
        });
        let br = schouten(&xf, &yf);
        assert!(br.max_abs() == 0.0);
    }

    #[test]
    fn bracket_vector_with_bivector_is_lie_derivative() {
        use crate::jet::Jet2;
        let x = [0.3, -0.7, 1.1];
        let xs = seed2(&x);
        // X = (sin y, x², z)
        let xcomp = [xs[1].sin(), xs[0] * xs[0], xs[2]];
        // B = b(x)·∂₀∧∂₁ + c(x)·∂₁∧∂₂ with b = x·z, c = y
        let b = xs[0] * xs[2];
        let c = xs[1];
        let mut xf = JetField::zeros(3, 1, ScaleDim::DIMENSIONLESS);
        for i in 0..3 {
            xf.set(&[i], xcomp[i].lower());
        }
        let mut bf = JetField::zeros(3, 2, ScaleDim::DIMENSIONLESS);
        bf.set(&[0, 1], b.lower());
        bf.set(&[1, 0], (-b).lower());
        bf.set(&[1, 2], c.lower());
        bf.set(&[2, 1], (-c).lower());
        let br = schouten(&xf, &bf);
        // L_X B by hand: (L_X B)^{ij} = X^l∂_l B^{ij} − B^{lj}∂_l X^i − B^{il}∂_l X^j
        let bv = |i: usize, j: usize| -> f64 {
            let bval = b.v;
            let cval = c.v;
            match (i, j) {
                (0, 1) => bval,
                (1, 0) => -bval,
                (1, 2) => cval,
                (2, 1) => -cval,
                _ => 0.0,
            }
        };
        let db = |l: usize, i: usize, j: usize| -> f64 {
            match (i, j) {
                (0, 1) => b.d[l],
                (1, 0) => -b.d[l],
                (1, 2) => c.d[l],
                (2, 1) => -c.d[l],
                _ => 0.0,
            }
        };
        let dx = |l: usize, i: usize| xcomp[i].d[l];
        for i in 0..3 {
            for j in 0..3 {
                let mut e = 0.0;
                for l in 0..3 {
                    e += xcomp[l].v * db(l, i, j) - bv(l, j) * dx(l, i) - bv(i, l) * dx(l, j);
                }
                let got = br.get(&[i, j]);
                assert!((got - e).abs() < 1e-13, "L_X B [{i}{j}]: {got} vs {e}");
            }
        }
        // graded antisymmetry: [B,X] = −(−1)^{(2−1)(1−1)}[X,B] = −[X,B]
        let br2 = schouten(&bf, &xf);
        assert!(br2.max_abs_diff(&br.scaled(-1.0)) < 1e-13);
    }

    #[test]
    fn bivector_self_bracket_is_twice_jacobiator() {
        use crate::jet::Jet2;
        let x = [0.3, -0.7, 1.1];
        let xs = seed2(&x);
        // Λ^{01} = f(x), Λ^{12} = g(x), Λ^{02} = h(x)
        let f = xs[2] * xs[2];
        let g = xs[0] * xs[1];
        let h = xs[1].sin();
        let mut lf = JetField::zeros(3, 2, ScaleDim::DIMENSIONLESS);
        let set_antisym = |lf: &mut JetField, i: usize, j: usize, v: Jet2| {
            lf.set(&[i, j], v.lower());
            lf.set(&[j, i], (-v).lower());
        };
        set_antisym(&mut lf, 0, 1, f);
        set_antisym(&mut lf, 1, 2, g);
        set_antisym(&mut lf, 0, 2, h);
        let br = schouten(&lf, &lf);
        // Jacobiator J^{ijk} = Σ_cyc Λ^{il}∂_l Λ^{jk}; [Λ,Λ] = −2J in the
        // graded convention used here.
        let lam = |i: usize, j: usize| lf.get(&[i, j]).v;
        let dlam = |l: usize, i: usize, j: usize| lf.get(&[i, j]).d[l];
        let jac = |i: usize, j: usize, k: usize| -> f64 {
            let mut s = 0.0;
            for l in 0..3 {
                s += lam(i, l) * dlam(l, j, k) + lam(j, l) * dlam(l, k, i) + lam(k, l) * dlam(l, i, j);
            }
            s
        };
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let got = br.get(&[i, j, k]);
                    let expect = -2.0 * jac(i, j, k);
                    assert!(
                        (got - expect).abs() < 1e-12,
                        "[Λ,Λ]^{i}{j}{k}: {got} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn exterior_derivative_of_exact_form_vanishes() {
        use crate::jet::Jet2;
        // A = df for f = x·sin(y) + z²; dA must vanish identically, and the
        // d of a constant-coefficient 1-form is zero.
        let x = [0.4, 1.2, -0.3];
        let xs = seed2(&x);
        let _f = xs[0] * xs[1].sin() + xs[2] * xs[2];
        // df components: (sin y, x cos y, 2z) — build their J1 jets from J2.
        let comps = [xs[1].sin(), xs[0] * xs[1].cos(), xs[2] * Jet2::from_f64(2.0)];
        let mut a = JetField::zeros(3, 1, ScaleDim::DIMENSIONLESS);
        for i in 0..3 {
            a.set(&[i], comps[i].lower());
        }
        let da = exterior_derivative(&a);
        assert!(da.max_abs() < 1e-13);
        let mut cst = JetField::zeros(3, 1, ScaleDim::DIMENSIONLESS);
        for i in 0..3 {
            cst.set(&[i], Jet1::constant(3, (i + 1) as f64));
        }
        assert!(exterior_derivative(&cst).max_abs() == 0.0);
    }

    #[test]
    fn exterior_derivative_matches_hand_computation() {
        // A = x·y dx + z dy: dA = −x dx∧dy + ... hand: dA = (∂_x A_y − ∂_y A_x)dx∧dy
        // + (∂_x A_z − ∂_z A_x) dx∧dz + (∂_y A_z − ∂_z A_y) dy∧dz
        let x = [2.0, 3.0, 5.0];
        let xs = seed2(&x);
        let comps = [xs[0] * xs[1], xs[2], crate::jet::Jet2::from_f64(0.0)];
        let mut a = JetField::zeros(3, 1, ScaleDim::DIMENSIONLESS);
        for i in 0..3 {
            a.set(&[i], comps[i].lower());
        }
        let da = exterior_derivative(&a);
        // ∂_x A_y − ∂_y A_x = 0 − x = −x
        assert!((da.get(&[0, 1]) - (-x[0])).abs() < 1e-14);
        // ∂_y A_z − ∂_z A_y = 0 − 1
        assert!((da.get(&[1, 2]) - (-1.0)).abs() < 1e-14);
        assert!((da.get(&[0, 2]) - 0.0).abs() < 1e-14);
        assert_eq!(da.get(&[0, 1]), -da.get(&[1, 0]));
    }
}
