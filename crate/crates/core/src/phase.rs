//! Phase-space kinematics on the chart (x^λ; x^i₀): normalization α⁰,
//! contact map 𝕕, time form τ, complementary map θ, orthogonal splitting
//! projections, adapted bases (b, β), the barred/hat metric blocks and the
//! vertical isomorphism ν_τ.
//!
//! Phase chart layout: axes 0..3 are x^λ, axes 4..6 are x^i₀ (i = 1..3).

use crate::connection::{AdLevel, MetricData};
use crate::error::GeomError;
use crate::linalg::inv3;
use crate::metric::Metric;
use crate::scale::ScaleDim;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub c: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            c: 1.0,
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

/// Admissible point (x^λ; x^i₀) of the phase chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub x: [f64; 4],
    pub v: [f64; 3],
}

impl PhasePoint {
    pub fn coords(&self) -> [f64; 7] {
        [
            self.x[0], self.x[1], self.x[2], self.x[3], self.v[0], self.v[1], self.v[2],
        ]
    }
}

/// All kinematic quantities of one phase point at scalar level `S`.
#[derive(Clone)]
pub struct Kinematics<S> {
    pub c: f64,
    pub v: [S; 3],
    pub md: MetricData<S>,
    pub alpha0: S,
    /// δ̄^λ₀ = δ^λ₀ + δ^λ_i x^i₀
    pub dbar0: [S; 4],
    /// δ̄^i_μ = δ^i_μ − δ⁰_μ x^i₀, indexed [i][μ]
    pub dbar_i: [[S; 4]; 3],
    /// ḡ_{0λ} = g_{ρλ} δ̄^ρ₀
    pub gbar0: [S; 4],
    /// ḡ_{iλ} = g_{iλ} + (α⁰)² ḡ_{0i} ḡ_{0λ}, indexed [i][λ]
    pub gbari: [[S; 4]; 3],
    /// ḡ^{0λ} = −(α⁰)² δ̄^λ₀
    pub gbar_up0: [S; 4],
    /// ḡ^{iλ} = δ̄^i_ρ g^{ρλ}, indexed [i][λ]
    pub gbar_upi: [[S; 4]; 3],
    /// ĝ₀₀ = −1/(α⁰)²
    pub ghat00: S,
    /// ĝ_{ij} = g_{ij} + (α⁰)² ḡ_{0i} ḡ_{0j}
    pub ghat_ij: [[S; 3]; 3],
    /// ĝ⁰⁰ = −(α⁰)²
    pub ghat_up00: S,
    /// ĝ^{ij} = δ̄^j_σ ḡ^{iσ}
    pub ghat_upij: [[S; 3]; 3],
    /// τ_λ = −(α⁰/c) ḡ_{0λ}
    pub tau: [S; 4],
    /// 𝕕^λ = c α⁰ δ̄^λ₀
    pub dvec: [S; 4],
    /// b₀ = δ̄^λ₀ ∂_λ
    pub b0: [S; 4],
    /// b_i = ∂_i + (α⁰)² ḡ_{0i} b₀, indexed [i][λ]
    pub bi: [[S; 4]; 3],
    /// β⁰_μ = δ⁰_μ − (α⁰)² ḡ_{0i} δ̄^i_μ
    pub beta0: [S; 4],
    /// β^i_μ = δ̄^i_μ
    pub betai: [[S; 4]; 3],
}

impl<S: AdLevel> Kinematics<S> {
    /// Build the kinematics of an admissible phase point; fails on
    /// non-timelike points and near the light cone (α⁰ > 10³).
    pub fn new(metric: &Metric, consts: &Constants, p: &PhasePoint) -> Result<Self, GeomError> {
        if !metric.domain_ok(&p.x) {
            return Err(GeomError::OutsideDomain {
                reason: format!("{:?} outside chart of {}", p.x, metric.id()),
            });
        }
        let coords = p.coords();
        let md = S::metric_data(metric, 7, &coords)?;
        let xs = S::seed_coords(7, &coords);
        let v = [xs[4], xs[5], xs[6]];
        Self::from_parts(md, v, consts.c)
    }

    /// Kinematics from already-evaluated metric data and velocities; the
    /// entry point for tangent-chart reuse and tests.
    pub fn from_parts(md: MetricData<S>, v: [S; 3], c: f64) -> Result<Self, GeomError> {
        let mut dbar0 = [S::one(); 4];
        for i in 0..3 {
            dbar0[1 + i] = v[i];
        }
        let mut dbar_i = [[S::zero(); 4]; 3];
        for i in 0..3 {
            dbar_i[i][1 + i] = S::one();
            dbar_i[i][0] = -v[i];
        }
        // ĝ₀₀ = g(b₀,b₀) must be negative (timelike admissibility)
        let mut ghat00 = S::zero();
        for r in 0..4 {
            for s in 0..4 {
                ghat00 = ghat00 + md.g[r][s] * dbar0[r] * dbar0[s];
            }
        }
        if ghat00.val() >= 0.0 {
            return Err(GeomError::NotTimelike {
                ratio: ghat00.val(),
            });
        }
        let alpha0 = ghat00.abs().sqrt().recip();
        if alpha0.val() > 1e3 {
            return Err(GeomError::NearLightCone {
                alpha0: alpha0.val(),
            });
        }
        let a2 = alpha0 * alpha0;
        let mut gbar0 = [S::zero(); 4];
        for l in 0..4 {
            let mut acc = S::zero();
            for r in 0..4 {
                acc = acc + md.g[r][l] * dbar0[r];
            }
            gbar0[l] = acc;
        }
        let mut gbari = [[S::zero(); 4]; 3];
        for i in 0..3 {
            for l in 0..4 {
                gbari[i][l] = md.g[1 + i][l] + a2 * gbar0[1 + i] * gbar0[l];
            }
        }
        let mut gbar_up0 = [S::zero(); 4];
        for l in 0..4 {
            gbar_up0[l] = -a2 * dbar0[l];
        }
        let mut gbar_upi = [[S::zero(); 4]; 3];
        for i in 0..3 {
            for l in 0..4 {
                let mut acc = S::zero();
                for r in 0..4 {
                    acc = acc + dbar_i[i][r] * md.ginv[r][l];
                }
                gbar_upi[i][l] = acc;
            }
        }
        let mut ghat_ij = [[S::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                ghat_ij[i][j] = md.g[1 + i][1 + j] + a2 * gbar0[1 + i] * gbar0[1 + j];
            }
        }
        let mut ghat_upij = [[S::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = S::zero();
                for s in 0..4 {
                    acc = acc + dbar_i[j][s] * gbar_upi[i][s];
                }
                ghat_upij[i][j] = acc;
            }
        }
        let cinv = S::from_f64(1.0 / c);
        let cs = S::from_f64(c);
        let mut tau = [S::zero(); 4];
        for l in 0..4 {
            tau[l] = -(alpha0 * cinv) * gbar0[l];
        }
        let mut dvec = [S::zero(); 4];
        for l in 0..4 {
            dvec[l] = cs * alpha0 * dbar0[l];
        }
        let b0 = dbar0;
        let mut bi = [[S::zero(); 4]; 3];
        for i in 0..3 {
            for l in 0..4 {
                let mut acc = a2 * gbar0[1 + i] * dbar0[l];
                if l == 1 + i {
                    acc = acc + S::one();
                }
                bi[i][l] = acc;
            }
        }
        let mut beta0 = [S::zero(); 4];
        for mu in 0..4 {
            let mut acc = if mu == 0 { S::one() } else { S::zero() };
            for i in 0..3 {
                // c α⁰ τ_i δ̄^i_μ = −(α⁰)² ḡ_{0i} δ̄^i_μ
                acc = acc - a2 * gbar0[1 + i] * dbar_i[i][mu];
            }
            beta0[mu] = acc;
        }
        let betai = dbar_i;
        Ok(Kinematics {
            c,
            v,
            md,
            alpha0,
            dbar0,
            dbar_i,
            gbar0,
            gbari,
            gbar_up0,
            gbar_upi,
            ghat00,
            ghat_ij,
            ghat_up00: -a2,
            ghat_upij,
            tau,
            dvec,
            b0,
            bi,
            beta0,
            betai,
        })
    }

    /// θ^μ_λ = δ^μ_λ − 𝕕^μ τ_λ, indexed [μ][λ].
    pub fn theta(&self) -> [[S; 4]; 4] {
        let mut th = [[S::zero(); 4]; 4];
        for m in 0..4 {
            for l in 0..4 {
                let mut acc = -(self.dvec[m] * self.tau[l]);
                if m == l {
                    acc = acc + S::one();
                }
                th[m][l] = acc;
            }
        }
        th
    }

    /// Parallel projection π∥^μ_λ = 𝕕^μ τ_λ on vectors, indexed [μ][λ].
    pub fn proj_par(&self) -> [[S; 4]; 4] {
        let mut p = [[S::zero(); 4]; 4];
        for m in 0..4 {
            for l in 0..4 {
                p[m][l] = self.dvec[m] * self.tau[l];
            }
        }
        p
    }

    /// ν_τ(X) = (1/(cα⁰)) X̃^i ∂⁰_i with X̃^i = X^i − x^i₀ X⁰.
    pub fn nu_tau(&self, x_vec: &[S; 4]) -> [S; 3] {
        let mut out = [S::zero(); 3];
        let w = (S::from_f64(self.c) * self.alpha0).recip();
        for i in 0..3 {
            out[i] = w * (x_vec[1 + i] - self.v[i] * x_vec[0]);
        }
        out
    }

    /// ν_τ⁻¹(Y) = c α⁰ Y^i b_i, a (scaled) spacetime vector.
    pub fn nu_tau_inv(&self, y_vert: &[S; 3]) -> [S; 4] {
        let mut out = [S::zero(); 4];
        let w = S::from_f64(self.c) * self.alpha0;
        for i in 0..3 {
            for l in 0..4 {
                out[l] = out[l] + w * y_vert[i] * self.bi[i][l];
            }
        }
        out
    }

    /// g(X, Y) at the point.
    pub fn g_dot(&self, x: &[S; 4], y: &[S; 4]) -> S {
        let mut acc = S::zero();
        for a in 0..4 {
            for b in 0..4 {
                acc = acc + self.md.g[a][b] * x[a] * y[b];
            }
        }
        acc
    }

    /// ḡ(α, β) for covectors.
    pub fn ginv_dot(&self, x: &[S; 4], y: &[S; 4]) -> S {
        let mut acc = S::zero();
        for a in 0..4 {
            for b in 0..4 {
                acc = acc + self.md.ginv[a][b] * x[a] * y[b];
            }
        }
        acc
    }
}

/// Scales of the kinematic objects.
pub fn tau_scale() -> ScaleDim {
    ScaleDim::new(1, 0, 0)
}
pub fn contact_scale() -> ScaleDim {
    ScaleDim::new(-1, 0, 0)
}

/// One row of the §4.3 identity suite.
#[derive(Clone, Debug)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub residual: f64,
    /// Identities involving the differentiation engine get the looser
    /// derivative tolerance class.
    pub derivative: bool,
}

/// Evaluate the "useful identities" of the adapted-frame lemma (17 rows
/// covering the 20 printed equations; frame-expansion pairs and the two
/// mixed-vanishing contractions are grouped) plus nothing else.
pub fn useful_identities(
    metric: &Metric,
    consts: &Constants,
    p: &PhasePoint,
) -> Result<Vec<IdentityResidual>, GeomError> {
    use crate::jet::Jet1;
    let kin: Kinematics<Jet1> = Kinematics::new(metric, consts, p)?;
    let a2 = kin.alpha0 * kin.alpha0;
    let mut rows: Vec<IdentityResidual> = Vec::with_capacity(17);
    let mut push = |name: &'static str, residual: f64, derivative: bool| {
        rows.push(IdentityResidual {
            name,
            residual,
            derivative,
        });
    };
    let val = |s: crate::jet::Jet1| s.v;

    // [01] lowered-frame expansions: ḡ_{0λ}d^λ = ĝ₀₀β⁰ and ḡ_{iλ}d^λ = ĝ_{ij}β^j
    let mut r = 0.0f64;
    for l in 0..4 {
        r = r.max((val(kin.gbar0[l]) - val(kin.ghat00 * kin.beta0[l])).abs());
        for i in 0..3 {
            let mut rhs = crate::jet::Jet1::constant(7, 0.0);
            for j in 0..3 {
                rhs = rhs + kin.ghat_ij[i][j] * kin.betai[j][l];
            }
            r = r.max((val(kin.gbari[i][l]) - val(rhs)).abs());
        }
    }
    push("lowered_frame_expansions", r, false);

    // [02] raised-frame expansions: ḡ^{0λ}∂_λ = ĝ⁰⁰b₀ and ḡ^{iλ}∂_λ = ĝ^{ij}b_j
    let mut r = 0.0f64;
    for l in 0..4 {
        r = r.max((val(kin.gbar_up0[l]) - val(kin.ghat_up00 * kin.b0[l])).abs());
        for i in 0..3 {
            let mut rhs = crate::jet::Jet1::constant(7, 0.0);
            for j in 0..3 {
                rhs = rhs + kin.ghat_upij[i][j] * kin.bi[j][l];
            }
            r = r.max((val(kin.gbar_upi[i][l]) - val(rhs)).abs());
        }
    }
    push("raised_frame_expansions", r, false);

    // [03] ḡ_{iλ}ḡ^{iμ} = δ^μ_λ + (α⁰)²ḡ_{0λ}δ̄^μ₀
    let mut r = 0.0f64;
    for l in 0..4 {
        for m in 0..4 {
            let mut lhs = crate::jet::Jet1::constant(7, 0.0);
            for i in 0..3 {
                lhs = lhs + kin.gbari[i][l] * kin.gbar_upi[i][m];
            }
            let mut rhs = a2 * kin.gbar0[l] * kin.dbar0[m];
            if l == m {
                rhs = rhs + crate::jet::Jet1::constant(7, 1.0);
            }
            r = r.max((val(lhs) - val(rhs)).abs());
        }
    }
    push("gbar_low_high_completeness", r, false);

    // [04] ḡ_{0i}ḡ^{iλ} = δ̄^λ₀ − ĝ₀₀ g^{0λ}
    let mut r = 0.0f64;
    for l in 0..4 {
        let mut lhs = crate::jet::Jet1::constant(7, 0.0);
        for i in 0..3 {
            lhs = lhs + kin.gbar0[1 + i] * kin.gbar_upi[i][l];
        }
        let rhs = kin.dbar0[l] - kin.ghat00 * kin.md.ginv[0][l];
        r = r.max((val(lhs) - val(rhs)).abs());
    }
    push("gbar0_contraction", r, false);

    // [05] ḡ_{iμ}g^{0μ} = (α⁰)²ḡ_{0i}
    let mut r = 0.0f64;
    for i in 0..3 {
        let mut lhs = crate::jet::Jet1::constant(7, 0.0);
        for m in 0..4 {
            lhs = lhs + kin.gbari[i][m] * kin.md.ginv[0][m];
        }
        r = r.max((val(lhs) - val(a2 * kin.gbar0[1 + i])).abs());
    }
    push("gbar_i_dual_zero_slot", r, false);

    // [06] ḡ_{0ν}ḡ^{iν} = 0 and ḡ_{iν}ḡ^{0ν} = 0
    let mut r = 0.0f64;
    for i in 0..3 {
        let mut l1 = crate::jet::Jet1::constant(7, 0.0);
        let mut l2 = crate::jet::Jet1::constant(7, 0.0);
        for n in 0..4 {
            l1 = l1 + kin.gbar0[n] * kin.gbar_upi[i][n];
            l2 = l2 + kin.gbari[i][n] * kin.gbar_up0[n];
        }
        r = r.max(val(l1).abs()).max(val(l2).abs());
    }
    push("mixed_bar_contractions_vanish", r, false);

    // [07] ḡ_{iν}δ̄^ν₀ = 0
    let mut r = 0.0f64;
    for i in 0..3 {
        let mut lhs = crate::jet::Jet1::constant(7, 0.0);
        for n in 0..4 {
            lhs = lhs + kin.gbari[i][n] * kin.dbar0[n];
        }
        r = r.max(val(lhs).abs());
    }
    push("gbar_i_annihilates_dbar0", r, false);

    // [08] ḡ_{iμ}δ̄^i_λ = g_{λμ} + (α⁰)²ḡ_{0λ}ḡ_{0μ}
    let mut r = 0.0f64;
    for l in 0..4 {
        for m in 0..4 {
            let mut lhs = crate::jet::Jet1::constant(7, 0.0);
            for i in 0..3 {
                lhs = lhs + kin.gbari[i][m] * kin.dbar_i[i][l];
            }
            let rhs = kin.md.g[l][m] + a2 * kin.gbar0[l] * kin.gbar0[m];
            r = r.max((val(lhs) - val(rhs)).abs());
        }
    }
    push("gbar_i_times_dbar_is_gperp", r, false);

    // [09] ḡ^{iλ}δ̄^j_λ = ĝ^{ij}
    let mut r = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let mut lhs = crate::jet::Jet1::constant(7, 0.0);
            for l in 0..4 {
                lhs = lhs + kin.gbar_upi[i][l] * kin.dbar_i[j][l];
            }
            r = r.max((val(lhs) - val(kin.ghat_upij[i][j])).abs());
        }
    }
    push("ghat_up_from_gbar", r, false);

    // [10] ĝ^{λν}ĝ_{μν} = δ^λ_μ (hat-block inverse, 0 and spatial parts)
    let mut r = (val(kin.ghat_up00 * kin.ghat00) - 1.0).abs();
    for i in 0..3 {
        for j in 0..3 {
            let mut lhs = crate::jet::Jet1::constant(7, 0.0);
            for h in 0..3 {
                lhs = lhs + kin.ghat_upij[i][h] * kin.ghat_ij[j][h];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            r = r.max((val(lhs) - expect).abs());
        }
    }
    push("hat_blocks_mutually_inverse", r, false);

    // [11] ĝ^{ih}ĝ_{jh} = δ^i_j with the opposite contraction order
    let mut r = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let mut lhs = crate::jet::Jet1::constant(7, 0.0);
            for h in 0..3 {
                lhs = lhs + kin.ghat_upij[h][i] * kin.ghat_ij[h][j];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            r = r.max((val(lhs) - expect).abs());
        }
    }
    push("hat_blocks_inverse_transposed", r, false);

    // [12] ĝ^{ij}g_{jσ} = δ̄^i_σ − ḡ^{i0}ḡ_{0σ}
    let mut r = 0.0f64;
    for i in 0..3 {
        for s in 0..4 {
            let mut lhs = crate::jet::Jet1::constant(7, 0.0);
            for j in 0..3 {
                lhs = lhs + kin.ghat_upij[i][j] * kin.md.g[1 + j][s];
            }
            let rhs = kin.dbar_i[i][s] - kin.gbar_upi[i][0] * kin.gbar0[s];
            r = r.max((val(lhs) - val(rhs)).abs());
        }
    }
    push("ghat_up_lowers_to_dbar", r, false);

    // [13] ĝ^{ij}δ^ρ_j = ḡ^{iρ} − ḡ^{i0}δ̄^ρ₀
    let mut r = 0.0f64;
    for i in 0..3 {
        for rho in 0..4 {
            let lhs = if rho >= 1 {
                kin.ghat_upij[i][rho - 1]
            } else {
                crate::jet::Jet1::constant(7, 0.0)
            };
            let rhs = kin.gbar_upi[i][rho] - kin.gbar_upi[i][0] * kin.dbar0[rho];
            r = r.max((val(lhs) - val(rhs)).abs());
        }
    }
    push("ghat_up_vs_gbar_up", r, false);

    // [14] ḡ_{0ν}δ̄^ν₀ = ĝ₀₀
    let mut lhs = crate::jet::Jet1::constant(7, 0.0);
    for n in 0..4 {
        lhs = lhs + kin.gbar0[n] * kin.dbar0[n];
    }
    push("gbar0_times_dbar0_is_ghat00", (val(lhs) - val(kin.ghat00)).abs(), false);

    // [15] ĝ^{ij}ḡ_{0j} = −ĝ₀₀ḡ^{i0}
    let mut r = 0.0f64;
    for i in 0..3 {
        let mut lhs = crate::jet::Jet1::constant(7, 0.0);
        for j in 0..3 {
            lhs = lhs + kin.ghat_upij[i][j] * kin.gbar0[1 + j];
        }
        let rhs = -(kin.ghat00 * kin.gbar_upi[i][0]);
        r = r.max((val(lhs) - val(rhs)).abs());
    }
    push("ghat_up_on_gbar0", r, false);

    // [16] ∂⁰_i α⁰ = (α⁰)³ ḡ_{0i}  (differentiation engine on the fiber)
    let a3 = kin.alpha0 * kin.alpha0 * kin.alpha0;
    let mut r = 0.0f64;
    for i in 0..3 {
        let lhs = kin.alpha0.d[4 + i];
        let rhs = val(a3 * kin.gbar0[1 + i]);
        r = r.max((lhs - rhs).abs());
    }
    push("fiber_derivative_of_alpha0", r, true);

    // [17] ∂_λ α⁰ = ½ (α⁰)³ ∂_λ ĝ₀₀ (spacetime derivative)
    let mut r = 0.0f64;
    for l in 0..4 {
        let lhs = kin.alpha0.d[l];
        let rhs = 0.5 * val(a3) * kin.ghat00.d[l];
        r = r.max((lhs - rhs).abs());
    }
    push("base_derivative_of_alpha0", r, true);

    Ok(rows)
}

/// Spatial-metric Cholesky factor used by the sampler to convert a drawn
/// physical velocity into chart velocity components.
pub fn chart_velocity_from_physical(
    metric: &Metric,
    x: &[f64; 4],
    u: &[f64; 3],
) -> Option<[f64; 3]> {
    let g = metric.components(x);
    if g[0][1] != 0.0 || g[0][2] != 0.0 || g[0][3] != 0.0 {
        // general case: admissibility is rechecked downstream
        return Some(*u);
    }
    let spat = [
        [g[1][1], g[1][2], g[1][3]],
        [g[2][1], g[2][2], g[2][3]],
        [g[3][1], g[3][2], g[3][3]],
    ];
    let l = crate::linalg::cholesky3(&spat)?;
    // Solve Lᵀ v = u·√|g₀₀| so that vᵀ S v = |g₀₀|·|u|² < |g₀₀| for |u| < 1.
    let s = (-g[0][0]).sqrt();
    let b = [u[0] * s, u[1] * s, u[2] * s];
    let mut v = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut acc = b[i];
        for j in (i + 1)..3 {
            acc -= l[j][i] * v[j];
        }
        v[i] = acc / l[i][i];
    }
    Some(v)
}

/// Inverse of the spatial hat block, for tests needing ĝ^{ij} directly.
pub fn ghat_up_oracle(kin: &Kinematics<f64>) -> Option<[[f64; 3]; 3]> {
    inv3(&kin.ghat_ij)
}
