//! Phase connections Γ and χ(K), the dynamical connection γ, the pair
//! (Ω, Λ), musical maps, adapted phase frames, volume forms and the
//! classifier implementing the contact/Jacobi equivalence theorems.
//!
//! Phase chart layout: axes 0..3 are x^λ, axes 4..6 are x^i₀.

use crate::connection::{AdLevel, LinearConnection};
use crate::error::GeomError;
use crate::exterior::{exterior_derivative, schouten, JetField};
use crate::jet::{Jet1, Real};
use crate::metric::Metric;
use crate::perturb::SigmaSpec;
use crate::phase::{Constants, Kinematics, PhasePoint};
use crate::scale::ScaleDim;
use crate::tensor::{volume_coefficient_1222, Components, Variance};
use std::collections::BTreeMap;

/// Connection of the phase bundle, given by coefficients Γ_λ^i.
#[derive(Clone, Debug, PartialEq)]
pub enum PhaseConnection {
    /// Γ = χ(K) for a linear spacetime connection K.
    Chi(LinearConnection),
    /// Γ = χ(K) + Σ.
    ChiPlusSigma {
        base: LinearConnection,
        sigma: SigmaSpec,
    },
}

impl PhaseConnection {
    pub fn metric_chi(metric: &Metric) -> PhaseConnection {
        PhaseConnection::Chi(LinearConnection::LeviCivita(metric.clone()))
    }

    /// Γ^i_λ (indexed [i][λ]) at AD level `S` on the 7-dim phase chart.
    pub fn coeffs<S: AdLevel>(
        &self,
        kin: &Kinematics<S>,
        consts: &Constants,
        coords7: &[f64; 7],
    ) -> Result<[[S; 4]; 3], GeomError> {
        let (base, sigma) = match self {
            PhaseConnection::Chi(k) => (k, None),
            PhaseConnection::ChiPlusSigma { base, sigma } => (base, Some(sigma)),
        };
        let kc: [[[S; 4]; 4]; 4] = base.coeffs(7, coords7)?;
        // Γ^i_λ = δ̄^i_ρ K_λ^ρ_σ δ̄^σ₀
        let mut gam = [[S::zero(); 4]; 3];
        for i in 0..3 {
            for l in 0..4 {
                let mut acc = S::zero();
                for r in 0..4 {
                    for s in 0..4 {
                        acc = acc + kin.dbar_i[i][r] * kc[l][r][s] * kin.dbar0[s];
                    }
                }
                gam[i][l] = acc;
            }
        }
        if let Some(spec) = sigma {
            let xs = S::seed_coords(7, coords7);
            let extra = spec.coeffs(kin, &xs, consts);
            for i in 0..3 {
                for l in 0..4 {
                    gam[i][l] = gam[i][l] + extra[i][l];
                }
            }
        }
        Ok(gam)
    }
}

/// Everything the structure layer derives at one phase point.
pub struct StructureObjects<S> {
    pub kin: Kinematics<S>,
    /// Γ^i_λ, [i][λ]
    pub gam: [[S; 4]; 3],
    /// γ^i = Γ^i_ρ δ̄^ρ₀
    pub gamma_up: [S; 3],
    /// γ as a phase vector: c α⁰ (δ̄^λ₀; γ^i)
    pub gamma7: [S; 7],
    /// Ω_{ab}
    pub omega: [[S; 7]; 7],
    /// Λ^{ab}
    pub lambda: [[S; 7]; 7],
}

/// Build Ω, Λ, γ at scalar level `S`.
pub fn build<S: AdLevel>(
    metric: &Metric,
    consts: &Constants,
    conn: &PhaseConnection,
    p: &PhasePoint,
) -> Result<StructureObjects<S>, GeomError> {
    let kin: Kinematics<S> = Kinematics::new(metric, consts, p)?;
    let coords = p.coords();
    let gam = conn.coeffs(&kin, consts, &coords)?;
    Ok(assemble(kin, gam))
}

/// Assemble the structure objects from kinematics and Γ-coefficients.
pub fn assemble<S: Real>(kin: Kinematics<S>, gam: [[S; 4]; 3]) -> StructureObjects<S> {
    let mut gamma_up = [S::zero(); 3];
    for i in 0..3 {
        for r in 0..4 {
            gamma_up[i] = gamma_up[i] + gam[i][r] * kin.dbar0[r];
        }
    }
    let ca = S::from_f64(kin.c) * kin.alpha0;
    let mut gamma7 = [S::zero(); 7];
    for l in 0..4 {
        gamma7[l] = ca * kin.dbar0[l];
    }
    for i in 0..3 {
        gamma7[4 + i] = ca * gamma_up[i];
    }
    // Ω = c α⁰ ḡ_{iμ} (d^i₀ − Γ^i_λ d^λ) ∧ d^μ
    let mut omega = [[S::zero(); 7]; 7];
    for i in 0..3 {
        for m in 0..4 {
            let w = ca * kin.gbari[i][m];
            omega[4 + i][m] = omega[4 + i][m] + w;
            omega[m][4 + i] = omega[m][4 + i] - w;
            for l in 0..4 {
                let wl = w * gam[i][l];
                omega[l][m] = omega[l][m] - wl;
                omega[m][l] = omega[m][l] + wl;
            }
        }
    }
    // Λ = (1/(cα⁰)) ḡ^{jλ} (∂_λ + Γ^i_λ ∂⁰_i) ∧ ∂⁰_j
    let ica = ca.recip();
    let mut lambda = [[S::zero(); 7]; 7];
    for j in 0..3 {
        for l in 0..4 {
            let w = ica * kin.gbar_upi[j][l];
            lambda[l][4 + j] = lambda[l][4 + j] + w;
            lambda[4 + j][l] = lambda[4 + j][l] - w;
            for i in 0..3 {
                let wi = w * gam[i][l];
                lambda[4 + i][4 + j] = lambda[4 + i][4 + j] + wi;
                lambda[4 + j][4 + i] = lambda[4 + j][4 + i] - wi;
            }
        }
    }
    StructureObjects {
        kin,
        gam,
        gamma_up,
        gamma7,
        omega,
        lambda,
    }
}

pub fn omega_scale() -> ScaleDim {
    ScaleDim::new(-1, 2, 0)
}
pub fn lambda_scale() -> ScaleDim {
    ScaleDim::new(1, -2, 0)
}

/// Curvature of a phase connection, R[Γ]^i_{λμ} stored [i][λ][μ] as the
/// antisymmetrization of −2(∂_λ Γ^i_μ + Γ^j_λ ∂⁰_j Γ^i_μ).
pub fn phase_curvature(gam: &[[Jet1; 4]; 3]) -> [[[f64; 4]; 4]; 3] {
    let mut r = [[[0.0; 4]; 4]; 3];
    for i in 0..3 {
        for l in 0..4 {
            for m in 0..4 {
                let mut c_lm = gam[i][m].d[l];
                let mut c_ml = gam[i][l].d[m];
                for j in 0..3 {
                    c_lm += gam[j][l].v * gam[i][m].d[4 + j];
                    c_ml += gam[j][m].v * gam[i][l].d[4 + j];
                }
                r[i][l][m] = -(c_lm - c_ml);
            }
        }
    }
    r
}

/// Λ♯(φ)^b = φ_a Λ^{ab}.
pub fn lambda_sharp(lambda: &[[f64; 7]; 7], phi: &[f64; 7]) -> [f64; 7] {
    let mut out = [0.0; 7];
    for b in 0..7 {
        for a in 0..7 {
            out[b] += phi[a] * lambda[a][b];
        }
    }
    out
}

/// Ω♭(X)_b = X^a Ω_{ab}.
pub fn omega_flat(omega: &[[f64; 7]; 7], x: &[f64; 7]) -> [f64; 7] {
    let mut out = [0.0; 7];
    for b in 0..7 {
        for a in 0..7 {
            out[b] += x[a] * omega[a][b];
        }
    }
    out
}

/// (Λ♯⊗Λ♯)(β)^{ab} = Λ^{ap} Λ^{bq} β_{pq} for a 2-form β.
pub fn lambda_sharp2(lambda: &[[f64; 7]; 7], beta: &[[f64; 7]; 7]) -> [[f64; 7]; 7] {
    let mut out = [[0.0; 7]; 7];
    for a in 0..7 {
        for b in 0..7 {
            let mut acc = 0.0;
            for p in 0..7 {
                for q in 0..7 {
                    acc += lambda[a][p] * lambda[b][q] * beta[p][q];
                }
            }
            out[a][b] = acc;
        }
    }
    out
}

/// (Ω♭⊗Ω♭)(B)_{ab} = Ω_{ap} Ω_{bq} B^{pq} for a 2-vector B.
pub fn omega_flat2(omega: &[[f64; 7]; 7], b2: &[[f64; 7]; 7]) -> [[f64; 7]; 7] {
    let mut out = [[0.0; 7]; 7];
    for a in 0..7 {
        for b in 0..7 {
            let mut acc = 0.0;
            for p in 0..7 {
                for q in 0..7 {
                    acc += omega[a][p] * omega[b][q] * b2[p][q];
                }
            }
            out[a][b] = acc;
        }
    }
    out
}

/// i_Λ Ω = ½ Λ^{ab} Ω_{ab}; equals −3 for every admissible point.
pub fn insertion_lambda_omega(omega: &[[f64; 7]; 7], lambda: &[[f64; 7]; 7]) -> f64 {
    let mut acc = 0.0;
    for a in 0..7 {
        for b in 0..7 {
            acc += lambda[a][b] * omega[a][b];
        }
    }
    0.5 * acc
}

/// Adapted phase frames (e₀, e_i, e⁰_i) and (ε⁰, ε^i, ε^i₀).
pub struct AdaptedPhaseFrames<S> {
    pub e0: [S; 7],
    pub ei: [[S; 7]; 3],
    pub e0i: [[S; 7]; 3],
    pub eps0: [S; 7],
    pub epsi: [[S; 7]; 3],
    pub epsi0: [[S; 7]; 3],
}

pub fn adapted_phase_frames<S: Real>(so: &StructureObjects<S>) -> AdaptedPhaseFrames<S> {
    let kin = &so.kin;
    let a2 = kin.alpha0 * kin.alpha0;
    let mut e0 = [S::zero(); 7];
    for l in 0..4 {
        e0[l] = kin.dbar0[l];
    }
    for i in 0..3 {
        e0[4 + i] = so.gamma_up[i];
    }
    let mut ei = [[S::zero(); 7]; 3];
    for i in 0..3 {
        // coefficient C^λ = δ^λ_i + (α⁰)² ḡ_{0i} δ̄^λ₀
        let mut cvec = [S::zero(); 4];
        for l in 0..4 {
            let mut acc = a2 * kin.gbar0[1 + i] * kin.dbar0[l];
            if l == 1 + i {
                acc = acc + S::one();
            }
            cvec[l] = acc;
        }
        for l in 0..4 {
            ei[i][l] = cvec[l];
        }
        for j in 0..3 {
            let mut acc = S::zero();
            for l in 0..4 {
                acc = acc + cvec[l] * so.gam[j][l];
            }
            ei[i][4 + j] = acc;
        }
    }
    let mut e0i = [[S::zero(); 7]; 3];
    for i in 0..3 {
        e0i[i][4 + i] = S::one();
    }
    let mut eps0 = [S::zero(); 7];
    for l in 0..4 {
        eps0[l] = -a2 * kin.gbar0[l];
    }
    let mut epsi = [[S::zero(); 7]; 3];
    for i in 0..3 {
        for l in 0..4 {
            epsi[i][l] = kin.dbar_i[i][l];
        }
    }
    let mut epsi0 = [[S::zero(); 7]; 3];
    for i in 0..3 {
        epsi0[i][4 + i] = S::one();
        for l in 0..4 {
            epsi0[i][l] = -so.gam[i][l];
        }
    }
    AdaptedPhaseFrames {
        e0,
        ei,
        e0i,
        eps0,
        epsi,
        epsi0,
    }
}

/// The ħ/m-rescaled musical isomorphism ♯: T*J₁E → 𝕋⊗𝕃⁻²⊗TJ₁E, split
/// through the phase splittings: ♯(φ) = (ħ/(mc⁴))·φ(γ)·γ + Λ♯(φ).
pub fn musical_sharp_full(
    so: &StructureObjects<f64>,
    consts: &Constants,
    phi: &[f64; 7],
) -> [f64; 7] {
    let mut phi_gamma = 0.0;
    for k in 0..7 {
        phi_gamma += phi[k] * so.gamma7[k];
    }
    let w = consts.hbar / (consts.mass * consts.c.powi(4));
    let ls = lambda_sharp(&so.lambda, phi);
    let mut out = [0.0; 7];
    for k in 0..7 {
        out[k] = w * phi_gamma * so.gamma7[k] + ls[k];
    }
    out
}

/// ♭(Y) = (mc⁴/ħ)·τ(Y)·τ + Ω♭(Y), the inverse of [`musical_sharp_full`].
pub fn musical_flat_full(
    so: &StructureObjects<f64>,
    consts: &Constants,
    y: &[f64; 7],
) -> [f64; 7] {
    let t7v = {
        let mut t = [0.0; 7];
        for l in 0..4 {
            t[l] = so.kin.tau[l];
        }
        t
    };
    let mut tau_y = 0.0;
    for k in 0..7 {
        tau_y += t7v[k] * y[k];
    }
    let w = consts.mass * consts.c.powi(4) / consts.hbar;
    let of = omega_flat(&so.omega, y);
    let mut out = [0.0; 7];
    for k in 0..7 {
        out[k] = w * tau_y * t7v[k] + of[k];
    }
    out
}

/// τ as a 7-covector (horizontal phase 1-form).
pub fn tau7<S: Real>(kin: &Kinematics<S>) -> [S; 7] {
    let mut t = [S::zero(); 7];
    for l in 0..4 {
        t[l] = kin.tau[l];
    }
    t
}

/// Covariant and contravariant regular-volume coefficients at a point:
/// the single independent component of −c²τ∧Ω³ at (d¹₀d²₀d³₀ d⁰d¹d²d³)
/// and of −(1/c²)γ∧Λ³ at (∂⁰₁∂⁰₂∂⁰₃ ∂₀∂₁∂₂∂₃).
pub fn volume_coefficients(so: &StructureObjects<f64>) -> (f64, f64) {
    let c = so.kin.c;
    let at = [4usize, 5, 6, 0, 1, 2, 3];
    let om = Components::from_fn(
        vec![7, 7],
        vec![Variance::Co; 2],
        omega_scale(),
        |i| so.omega[i[0]][i[1]],
    );
    let mut tau_scaled = [0.0; 7];
    let t7 = tau7(&so.kin);
    for k in 0..7 {
        tau_scaled[k] = -c * c * t7[k];
    }
    let cov = volume_coefficient_1222(&tau_scaled, &om, &at);
    let lam = Components::from_fn(
        vec![7, 7],
        vec![Variance::Contra; 2],
        lambda_scale(),
        |i| so.lambda[i[0]][i[1]],
    );
    let mut gamma_scaled = [0.0; 7];
    for k in 0..7 {
        gamma_scaled[k] = -so.gamma7[k] / (c * c);
    }
    let contra = volume_coefficient_1222(&gamma_scaled, &lam, &at);
    (cov, contra)
}

/// Expected volume coefficients from the printed closed forms:
/// 3!·c⁴(α⁰)⁴·det g and −3!·(cα⁰)⁻⁴·det ḡ.
pub fn volume_coefficients_expected(kin: &Kinematics<f64>) -> (f64, f64) {
    let ca = kin.c * kin.alpha0;
    let cov = 6.0 * ca.powi(4) * kin.md.det;
    let contra = -6.0 / (ca.powi(4) * kin.md.det);
    (cov, contra)
}

/// L_Γ τ stored components (∂_λτ_μ + Γ^j_λ ∂⁰_jτ_μ) − (λ↔μ).
pub fn lie_gamma_tau(so: &StructureObjects<Jet1>) -> [[f64; 4]; 4] {
    let mut c = [[0.0; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            let mut acc = so.kin.tau[m].d[l];
            for j in 0..3 {
                acc += so.gam[j][l].v * so.kin.tau[m].d[4 + j];
            }
            c[l][m] = acc;
        }
    }
    let mut out = [[0.0; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            out[l][m] = c[l][m] - c[m][l];
        }
    }
    out
}

/// L_R τ: 3-form from the curvature of Γ,
/// stored as the full alternation sum of −(α⁰/c) ḡ_{iλ} R^i_{μν}.
pub fn lie_r_tau(so: &StructureObjects<Jet1>) -> Components {
    let r = phase_curvature(&so.gam);
    let kin = &so.kin;
    let w = -kin.alpha0.v / kin.c;
    let coeff = |l: usize, m: usize, n: usize| -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            acc += w * kin.gbari[i][l].v * r[i][m][n];
        }
        acc
    };
    let mut out = Components::zeros(vec![4, 4, 4], vec![Variance::Co; 3], ScaleDim::new(1, 0, 0));
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                // full alternation of a coefficient antisymmetric in its
                // last two slots: cyclic sum
                let v = coeff(a, b, c) + coeff(b, c, a) + coeff(c, a, b);
                out.set(&[a, b, c], v);
            }
        }
    }
    out
}

/// L_{ν_τ(X)} L_Γ τ for a spacetime vector X: stored 2-form
/// −(1/(c²α⁰))[∂_λ(α⁰ḡ_{iμ}) + ∂⁰_i(α⁰ḡ_{jμ}Γ^j_λ)]X̃^i − (λ↔μ).
pub fn lie_nu_lie_gamma_tau(so: &StructureObjects<Jet1>, x_vec: &[f64; 4]) -> [[f64; 4]; 4] {
    let kin = &so.kin;
    let mut xt = [0.0; 3];
    for i in 0..3 {
        xt[i] = x_vec[1 + i] - kin.v[i].v * x_vec[0];
    }
    let w = -1.0 / (kin.c * kin.c * kin.alpha0.v);
    let mut c = [[0.0; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            let mut acc = 0.0;
            for i in 0..3 {
                // ∂_λ(α⁰ ḡ_{iμ})
                let agm = kin.alpha0 * kin.gbari[i][m];
                acc += agm.d[l] * xt[i];
                // ∂⁰_i(α⁰ ḡ_{jμ} Γ^j_λ)
                for j in 0..3 {
                    let t = kin.alpha0 * kin.gbari[j][m] * so.gam[j][l];
                    acc += t.d[4 + i] * xt[i];
                }
            }
            c[l][m] = w * acc;
        }
    }
    let mut out = [[0.0; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            out[l][m] = c[l][m] - c[m][l];
        }
    }
    out
}

/// Pullback forms of the scaled tangent 2-form along the contact map:
/// (𝕕*Υ̃, 𝕕*Υ̃∥, 𝕕*Υ̃⊥) as stored 7×7 arrays, from the printed
/// coordinate expressions.
pub fn dstar_upsilon_split(
    so: &StructureObjects<Jet1>,
    k_coeffs: &[[[Jet1; 4]; 4]; 4],
) -> ([[f64; 7]; 7], [[f64; 7]; 7], [[f64; 7]; 7]) {
    let kin = &so.kin;
    let c = kin.c;
    let a0 = kin.alpha0.v;
    // 𝕕*Υ̃ = cα⁰ (ḡ_{iμ} d^i₀ + (½(α⁰)²ḡ_{0μ}∂_νĝ₀₀ − g_{λμ}δ̄^ρ₀K_ν^λ_ρ) d^ν) ∧ d^μ
    let mut total = [[0.0; 7]; 7];
    for m in 0..4 {
        for i in 0..3 {
            let w = c * a0 * kin.gbari[i][m].v;
            total[4 + i][m] += w;
            total[m][4 + i] -= w;
        }
        for n in 0..4 {
            let mut coef = 0.5 * a0 * a0 * kin.gbar0[m].v * kin.ghat00.d[n];
            for l in 0..4 {
                for r in 0..4 {
                    coef -= kin.md.g[l][m].v * kin.dbar0[r].v * k_coeffs[n][l][r].v;
                }
            }
            let w = c * a0 * coef;
            total[n][m] += w;
            total[m][n] -= w;
        }
    }
    // 𝕕*Υ̃∥ = c(α⁰)³ ḡ_{0μ}(½∂_νĝ₀₀ + ḡ_{0λ}δ̄^ρ₀K_ν^λ_ρ) d^ν∧d^μ
    let mut par = [[0.0; 7]; 7];
    for m in 0..4 {
        for n in 0..4 {
            let mut coef = 0.5 * kin.ghat00.d[n];
            for l in 0..4 {
                for r in 0..4 {
                    coef += kin.gbar0[l].v * kin.dbar0[r].v * k_coeffs[n][l][r].v;
                }
            }
            let w = c * a0 * a0 * a0 * kin.gbar0[m].v * coef;
            par[n][m] += w;
            par[m][n] -= w;
        }
    }
    // 𝕕*Υ̃⊥ = cα⁰ ḡ_{iμ}(d^i₀ − δ̄^i_λ δ̄^ρ₀ K_ν^λ_ρ d^ν) ∧ d^μ
    let mut perp = [[0.0; 7]; 7];
    for m in 0..4 {
        for i in 0..3 {
            let w = c * a0 * kin.gbari[i][m].v;
            perp[4 + i][m] += w;
            perp[m][4 + i] -= w;
            for n in 0..4 {
                let mut coef = 0.0;
                for l in 0..4 {
                    for r in 0..4 {
                        coef += kin.dbar_i[i][l].v * kin.dbar0[r].v * k_coeffs[n][l][r].v;
                    }
                }
                let wn = w * coef;
                perp[n][m] -= wn;
                perp[m][n] += wn;
            }
        }
    }
    (total, par, perp)
}

/// Verdict flags of the phase-structure classifier.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StructureVerdict {
    pub acc: bool,
    pub contact: bool,
    pub acpj: bool,
    pub jacobi: bool,
    pub dual_pair: bool,
    pub regular: bool,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub points_used: usize,
    pub points_skipped: usize,
}

/// Per-point residual bundle of the classifier.
pub struct PointResiduals {
    pub named: BTreeMap<String, f64>,
    pub cov_volume: f64,
    pub contra_volume: f64,
}

fn max7(m: &[[f64; 7]; 7]) -> f64 {
    m.iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, v| a.max(v.abs()))
}

fn mat7_vals(m: &[[Jet1; 7]; 7]) -> [[f64; 7]; 7] {
    let mut out = [[0.0; 7]; 7];
    for a in 0..7 {
        for b in 0..7 {
            out[a][b] = m[a][b].v;
        }
    }
    out
}

fn jetfield_of_mat7(m: &[[Jet1; 7]; 7], scale: ScaleDim, variance_hint: Variance) -> JetField {
    let _ = variance_hint;
    let mut f = JetField::zeros(7, 2, scale);
    for a in 0..7 {
        for b in 0..7 {
            f.set(&[a, b], m[a][b]);
        }
    }
    f
}

/// Evaluate every classifier residual at one admissible point.
pub fn point_residuals(
    metric: &Metric,
    consts: &Constants,
    conn: &PhaseConnection,
    p: &PhasePoint,
) -> Result<PointResiduals, GeomError> {
    let so: StructureObjects<Jet1> = build(metric, consts, conn, p)?;
    let c = consts.c;
    let c2 = c * c;
    let omega_v = mat7_vals(&so.omega);
    let lambda_v = mat7_vals(&so.lambda);
    let mut gamma_v = [0.0; 7];
    for k in 0..7 {
        gamma_v[k] = so.gamma7[k].v;
    }
    let omega_norm = max7(&omega_v).max(1e-300);
    let lambda_norm = max7(&lambda_v).max(1e-300);
    let gamma_norm = gamma_v.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);

    // dΩ and dτ
    let om_field = jetfield_of_mat7(&so.omega, omega_scale(), Variance::Co);
    let d_omega = exterior_derivative(&om_field);
    let mut tau_field = JetField::zeros(7, 1, crate::phase::tau_scale());
    for l in 0..4 {
        tau_field.set(&[l], so.kin.tau[l]);
    }
    let d_tau = exterior_derivative(&tau_field);

    // Ω + c² dτ
    let mut contact_defect = 0.0f64;
    for a in 0..7 {
        for b in 0..7 {
            let v = omega_v[a][b] + c2 * d_tau.get(&[a, b]);
            contact_defect = contact_defect.max(v.abs());
        }
    }

    // brackets
    let lam_field = jetfield_of_mat7(&so.lambda, lambda_scale(), Variance::Contra);
    let mut gam_field = JetField::zeros(7, 1, ScaleDim::new(-1, 0, 0));
    for k in 0..7 {
        gam_field.set(&[k], so.gamma7[k]);
    }
    let gl = schouten(&gam_field, &lam_field);
    let ll = schouten(&lam_field, &lam_field);

    // γ∧Λ (full-convention wedge)
    let gamma_c = Components::from_fn(
        vec![7],
        vec![Variance::Contra],
        ScaleDim::new(-1, 0, 0),
        |i| gamma_v[i[0]],
    );
    let lambda_c = Components::from_fn(
        vec![7, 7],
        vec![Variance::Contra; 2],
        lambda_scale(),
        |i| lambda_v[i[0]][i[1]],
    );
    let gamma_wedge_lambda = crate::tensor::wedge(&gamma_c, &lambda_c)?;
    let gwl_norm = gamma_wedge_lambda.max_abs().max(1e-300);

    // [Λ,Λ] − (2/c²) γ∧Λ
    let mut jacobi2 = 0.0f64;
    for idx in crate::tensor::multi_indices(&[7usize, 7, 7]) {
        let v = ll.get(&idx) - (2.0 / c2) * gamma_wedge_lambda.get(&idx);
        jacobi2 = jacobi2.max(v.abs());
    }

    // ACPJ defects:
    // [−γ/c², Λ] − (1/c²) γ∧Λ♯(L_γτ)
    let mut d_tau_m = [[0.0; 7]; 7];
    for a in 0..7 {
        for b in 0..7 {
            d_tau_m[a][b] = d_tau.get(&[a, b]);
        }
    }
    let mut l_gamma_tau = [0.0; 7];
    for b in 0..7 {
        for a in 0..7 {
            l_gamma_tau[b] += gamma_v[a] * d_tau_m[a][b];
        }
    }
    let sharp_lgt = lambda_sharp(&lambda_v, &l_gamma_tau);
    let sharp_lgt_c = Components::from_fn(
        vec![7],
        vec![Variance::Contra],
        ScaleDim::new(1, -2, 0),
        |i| sharp_lgt[i[0]],
    );
    let gwsharp = crate::tensor::wedge(&gamma_c, &sharp_lgt_c)?;
    let mut acpj1 = 0.0f64;
    for idx in crate::tensor::multi_indices(&[7usize, 7]) {
        let v = -gl.get(&idx) / c2 - gwsharp.get(&idx) / c2;
        acpj1 = acpj1.max(v.abs());
    }
    // [Λ,Λ] − 2 γ∧(Λ♯⊗Λ♯)(dτ)
    let ls2 = lambda_sharp2(&lambda_v, &d_tau_m);
    let ls2_c = Components::from_fn(
        vec![7, 7],
        vec![Variance::Contra; 2],
        ScaleDim::new(3, -4, 0),
        |i| ls2[i[0]][i[1]],
    );
    let gws2 = crate::tensor::wedge(&gamma_c, &ls2_c)?;
    let mut acpj2 = 0.0f64;
    for idx in crate::tensor::multi_indices(&[7usize, 7, 7]) {
        let v = ll.get(&idx) - 2.0 * gws2.get(&idx);
        acpj2 = acpj2.max(v.abs());
    }

    // duality residuals
    let i_gamma_omega = omega_flat(&omega_v, &gamma_v);
    let t7v = {
        let mut t = [0.0; 7];
        for l in 0..4 {
            t[l] = so.kin.tau[l].v;
        }
        t
    };
    let i_tau_lambda = lambda_sharp(&lambda_v, &t7v);
    let mut tau_gamma = 0.0;
    for k in 0..7 {
        tau_gamma += t7v[k] * gamma_v[k];
    }
    let mut ins_defect = (insertion_lambda_omega(&omega_v, &lambda_v) + 3.0).abs();
    // duality of the musical pair: (Λ♯⊗Λ♯)(Ω) = −Λ and (Ω♭⊗Ω♭)(Λ) = −Ω
    let lso = lambda_sharp2(&lambda_v, &omega_v);
    let ofl = omega_flat2(&omega_v, &lambda_v);
    let mut dual_pair = 0.0f64;
    for a in 0..7 {
        for b in 0..7 {
            dual_pair = dual_pair.max((lso[a][b] + lambda_v[a][b]).abs() / lambda_norm);
            dual_pair = dual_pair.max((ofl[a][b] + omega_v[a][b]).abs() / omega_norm);
        }
    }
    ins_defect = ins_defect.max(dual_pair);

    let (cov, contra) = volume_coefficients(&StructureObjects {
        kin: lower_kin(&so.kin),
        gam: lower33(&so.gam),
        gamma_up: [so.gamma_up[0].v, so.gamma_up[1].v, so.gamma_up[2].v],
        gamma7: gamma_v,
        omega: omega_v,
        lambda: lambda_v,
    });

    let mut named = BTreeMap::new();
    named.insert("d_omega".into(), d_omega.max_abs() / omega_norm);
    named.insert("contact_defect".into(), contact_defect / omega_norm);
    named.insert("gamma_lambda_bracket".into(), gl.max_abs() / gwl_norm);
    named.insert("jacobi_defect".into(), jacobi2 / ((2.0 / c2) * gwl_norm));
    named.insert("acpj_defect_1".into(), acpj1 / (gwl_norm / c2));
    named.insert("acpj_defect_2".into(), acpj2 / ((2.0 / c2) * gwl_norm));
    named.insert(
        "i_gamma_omega".into(),
        i_gamma_omega
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()))
            / (gamma_norm * omega_norm),
    );
    named.insert(
        "i_tau_lambda".into(),
        i_tau_lambda
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()))
            / lambda_norm,
    );
    named.insert("tau_gamma_minus_one".into(), (tau_gamma - 1.0).abs());
    named.insert("duality_anchor".into(), ins_defect);
    Ok(PointResiduals {
        named,
        cov_volume: cov,
        contra_volume: contra,
    })
}

fn lower_kin(kin: &Kinematics<Jet1>) -> Kinematics<f64> {
    // value projection of all fields
    let mut md = crate::connection::MetricData {
        g: [[0.0; 4]; 4],
        ginv: [[0.0; 4]; 4],
        dg: [[[0.0; 4]; 4]; 4],
        det: kin.md.det.v,
    };
    for a in 0..4 {
        for b in 0..4 {
            md.g[a][b] = kin.md.g[a][b].v;
            md.ginv[a][b] = kin.md.ginv[a][b].v;
            for l in 0..4 {
                md.dg[l][a][b] = kin.md.dg[l][a][b].v;
            }
        }
    }
    let v = [kin.v[0].v, kin.v[1].v, kin.v[2].v];
    Kinematics::from_parts(md, v, kin.c).expect("value projection stays admissible")
}

fn lower33(gam: &[[Jet1; 4]; 3]) -> [[f64; 4]; 3] {
    let mut out = [[0.0; 4]; 3];
    for i in 0..3 {
        for l in 0..4 {
            out[i][l] = gam[i][l].v;
        }
    }
    out
}

/// σ₆/σ₇ of the stored Ω: the kernel is one-dimensional exactly when this
/// ratio blows up; the null direction is γ.
pub fn omega_kernel_ratio(omega: &[[f64; 7]; 7]) -> f64 {
    let m = nalgebra::DMatrix::<f64>::from_fn(7, 7, |a, b| omega[a][b]);
    let svd = m.svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s[5] / s[6].max(1e-300)
}

/// Aggregate the classifier over a sample of points.
pub fn classify_phase_structure(
    metric: &Metric,
    consts: &Constants,
    conn: &PhaseConnection,
    samples: &[PhasePoint],
    tol: f64,
) -> Result<StructureVerdict, GeomError> {
    let mut agg: BTreeMap<String, f64> = BTreeMap::new();
    let mut used = 0usize;
    let mut skipped = 0usize;
    let mut regular = true;
    for p in samples {
        match point_residuals(metric, consts, conn, p) {
            Ok(r) => {
                used += 1;
                for (k, v) in r.named {
                    let e = agg.entry(k).or_insert(0.0);
                    if v > *e {
                        *e = v;
                    }
                }
                if r.cov_volume.abs() < 1e-12 || r.contra_volume.abs() < 1e-12 {
                    regular = false;
                }
            }
            Err(GeomError::NotTimelike { .. }) | Err(GeomError::NearLightCone { .. }) => {
                skipped += 1;
            }
            Err(e) => return Err(e),
        }
    }
    if used == 0 {
        return Err(GeomError::OutsideDomain {
            reason: "zero admissible samples".into(),
        });
    }
    let get = |k: &str| agg.get(k).copied().unwrap_or(f64::INFINITY);
    let acc = get("d_omega") <= tol && regular;
    let contact = get("contact_defect") <= tol && regular;
    let acpj = get("acpj_defect_1") <= tol && get("acpj_defect_2") <= tol;
    let jacobi = get("gamma_lambda_bracket") <= tol && get("jacobi_defect") <= tol;
    let dual_pair = get("duality_anchor") <= tol
        && get("i_gamma_omega") <= tol
        && get("i_tau_lambda") <= tol
        && get("tau_gamma_minus_one") <= tol;
    // structural implications; violating them means an internal error
    assert!(
        !contact || acc,
        "internal error: contact verdict without almost-cosymplectic-contact"
    );
    assert!(
        !jacobi || acpj,
        "internal error: Jacobi verdict without almost-coPoisson-Jacobi"
    );
    Ok(StructureVerdict {
        acc,
        contact,
        acpj,
        jacobi,
        dual_pair,
        regular,
        residuals: agg,
        tolerance: tol,
        points_used: used,
        points_skipped: skipped,
    })
}
