//! Non-metric perturbations of the phase connection: Γ = Γ[g] + Σ, the
//! (0,2)-tensor avatars Σ̲, σ and [σ], the symmetric/antisymmetric ψ/φ
//! constructions and the electromagnetic field.

use crate::connection::Modulation;
use crate::error::GeomError;
use crate::jet::{Jet1, Real};
use crate::phase::{Constants, Kinematics};

/// Closed-form spacetime (0,2) tensor table with smooth modulation.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorTableSpec {
    pub table: [[f64; 4]; 4],
    pub modulation: Modulation,
}

impl TensorTableSpec {
    pub fn eval<S: Real>(&self, x: &[S; 4]) -> [[S; 4]; 4] {
        let m = self.modulation.eval(x);
        let mut out = [[S::zero(); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                out[a][b] = S::from_f64(self.table[a][b]) * m;
            }
        }
        out
    }

    pub fn symmetrized(mut self) -> Self {
        for a in 0..4 {
            for b in 0..a {
                let s = 0.5 * (self.table[a][b] + self.table[b][a]);
                self.table[a][b] = s;
                self.table[b][a] = s;
            }
        }
        self
    }

    pub fn antisymmetrized(mut self) -> Self {
        for a in 0..4 {
            self.table[a][a] = 0.0;
            for b in 0..a {
                let s = 0.5 * (self.table[a][b] - self.table[b][a]);
                self.table[a][b] = s;
                self.table[b][a] = -s;
            }
        }
        self
    }
}

/// Electromagnetic field: a closed spacetime 2-form from the catalog.
#[derive(Clone, Debug, PartialEq)]
pub enum EmField {
    /// F = e·d⁰∧d¹ (stored F_{01} = e).
    Uniform { e: f64 },
    /// F = (k/r²)·d⁰∧d¹ on the Schwarzschild chart (x¹ = r).
    Coulomb { k: f64 },
    /// F = (e + grad·x)·d⁰∧d¹: closed only when grad₂ = grad₃ = 0 (the
    /// error-path fixture for the closedness guard).
    GradedUniform { e: f64, grad: [f64; 4] },
}

impl EmField {
    /// Stored antisymmetric components F_{λμ}.
    pub fn components<S: Real>(&self, x: &[S; 4]) -> [[S; 4]; 4] {
        let mut f = [[S::zero(); 4]; 4];
        match self {
            EmField::Uniform { e } => {
                f[0][1] = S::from_f64(*e);
                f[1][0] = -S::from_f64(*e);
            }
            EmField::Coulomb { k } => {
                let r = x[1];
                let v = S::from_f64(*k) / (r * r);
                f[0][1] = v;
                f[1][0] = -v;
            }
            EmField::GradedUniform { e, grad } => {
                let mut v = S::from_f64(*e);
                for (mu, g) in grad.iter().enumerate() {
                    v = v + S::from_f64(*g) * x[mu];
                }
                f[0][1] = v;
                f[1][0] = -v;
            }
        }
        f
    }

    /// A spacetime potential A with dA = F in stored components, when the
    /// catalog field has one in closed form.
    pub fn potential<S: Real>(&self, x: &[S; 4]) -> Option<[S; 4]> {
        match self {
            EmField::Uniform { e } => {
                // A = e·x⁰ d¹: (dA)_{01} = e
                let mut a = [S::zero(); 4];
                a[1] = S::from_f64(*e) * x[0];
                Some(a)
            }
            EmField::Coulomb { k } => {
                // A = (k/r) d⁰: (dA)_{01} = −∂_1(k/r) = +k/r².
                let mut a = [S::zero(); 4];
                a[0] = S::from_f64(*k) / x[1];
                Some(a)
            }
            EmField::GradedUniform { .. } => None,
        }
    }

    /// Max |dF| over the spacetime 3-form, from exact jets.
    pub fn closedness_residual(&self, x: &[f64; 4]) -> f64 {
        let xs = crate::jet::seed1(x);
        let x4 = [xs[0], xs[1], xs[2], xs[3]];
        let f = self.components(&x4);
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let r = f[b][c].d[a] - f[a][c].d[b] + f[a][b].d[c];
                    worst = worst.max(r.abs());
                }
            }
        }
        worst
    }

    pub fn id(&self) -> &'static str {
        match self {
            EmField::Uniform { .. } => "uniform",
            EmField::Coulomb { .. } => "coulomb",
            EmField::GradedUniform { .. } => "graded_uniform",
        }
    }
}

/// Phase-dependent scaled (0,2) spacetime tensor σ_{λμ}(x, x₀).
#[derive(Clone, Debug, PartialEq)]
pub enum SigmaTensorSpec {
    /// σ = (c²m/ħ)(g + k·c²·τ⊗τ); Σ = (c²m/ħ)ν_τ for every k.
    MetricPlusKTauTau { k: f64 },
    /// Symmetric construction σ = −½(ψ − 2(𝕕⌟ψ)⊙τ) from a symmetric ψ.
    FromPsi { psi: TensorTableSpec },
    /// Antisymmetric construction from an antisymmetric φ, normalized so
    /// that the perturbed 2-form is Ω[g] + ½φ in stored components: the
    /// tensor σ = −½(φ′ − 2(𝕕⌟φ′)∧τ) is built from φ′ = ½φ (the same
    /// normalization the electromagnetic case uses).
    FromPhi { phi: TensorTableSpec },
    /// Electromagnetic case: the φ construction with φ = ½(q/m)·F, the
    /// normalization under which Ω[g,Γ] = Ω[g] + ½(q/m)F in stored arrays.
    Em { field: EmField, q: f64, m: f64 },
    /// Mixed case σ = −½(ω − (𝕕⌟ω)⊗τ − τ⊗(𝕕⌟²ω)) for ω = ψ + φ.
    Mix {
        psi: TensorTableSpec,
        phi: TensorTableSpec,
    },
    /// Raw table (general tests).
    Table { t: TensorTableSpec },
}

fn x4_of<S: Real>(kin: &Kinematics<S>, xs: &[S]) -> [S; 4] {
    let _ = kin;
    [xs[0], xs[1], xs[2], xs[3]]
}

impl SigmaTensorSpec {
    /// σ_{λμ} at the point of `kin`, with chart coordinates `xs`.
    pub fn components<S: Real>(
        &self,
        kin: &Kinematics<S>,
        xs: &[S],
        consts: &Constants,
    ) -> [[S; 4]; 4] {
        let x4 = x4_of(kin, xs);
        match self {
            SigmaTensorSpec::MetricPlusKTauTau { k } => {
                let c2m = S::from_f64(consts.c * consts.c * consts.mass / consts.hbar);
                let kc2 = S::from_f64(*k * consts.c * consts.c);
                let mut out = [[S::zero(); 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        out[a][b] = c2m * (kin.md.g[a][b] + kc2 * kin.tau[a] * kin.tau[b]);
                    }
                }
                out
            }
            SigmaTensorSpec::FromPsi { psi } => {
                let p = psi.eval(&x4);
                let half = S::from_f64(0.5);
                // (𝕕⌟ψ)_μ = 𝕕^ρ ψ_{ρμ}
                let mut dpsi = [S::zero(); 4];
                for m in 0..4 {
                    for r in 0..4 {
                        dpsi[m] = dpsi[m] + kin.dvec[r] * p[r][m];
                    }
                }
                let mut out = [[S::zero(); 4]; 4];
                for l in 0..4 {
                    for m in 0..4 {
                        out[l][m] = -half * p[l][m]
                            + half * (dpsi[l] * kin.tau[m] + kin.tau[l] * dpsi[m]);
                    }
                }
                out
            }
            SigmaTensorSpec::FromPhi { phi } => {
                let f = phi.eval(&x4);
                let half = S::from_f64(0.5);
                let mut fp = [[S::zero(); 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        fp[a][b] = half * f[a][b];
                    }
                }
                Self::sigma_from_phi(kin, &fp)
            }
            SigmaTensorSpec::Em { field, q, m } => {
                let f = field.components(&x4);
                let w = S::from_f64(0.5 * q / m);
                let mut phi = [[S::zero(); 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        phi[a][b] = w * f[a][b];
                    }
                }
                Self::sigma_from_phi(kin, &phi)
            }
            SigmaTensorSpec::Mix { psi, phi } => {
                let ps = psi.eval(&x4);
                let ph = phi.eval(&x4);
                let half = S::from_f64(0.5);
                let mut om = [[S::zero(); 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        om[a][b] = ps[a][b] + half * ph[a][b];
                    }
                }
                let half = S::from_f64(0.5);
                // (𝕕⌟ω)_μ = 𝕕^ρ ω_{ρμ}, (𝕕⌟²ω)_λ = ω_{λρ} 𝕕^ρ
                let mut d1 = [S::zero(); 4];
                let mut d2 = [S::zero(); 4];
                for m in 0..4 {
                    for r in 0..4 {
                        d1[m] = d1[m] + kin.dvec[r] * om[r][m];
                        d2[m] = d2[m] + om[m][r] * kin.dvec[r];
                    }
                }
                let mut out = [[S::zero(); 4]; 4];
                for l in 0..4 {
                    for m in 0..4 {
                        out[l][m] =
                            -half * (om[l][m] - d1[l] * kin.tau[m] - kin.tau[l] * d2[m]);
                    }
                }
                out
            }
            SigmaTensorSpec::Table { t } => t.eval(&x4),
        }
    }

    /// σ = −½(φ − 2(𝕕⌟φ)∧τ) with the alternation-normalized wedge:
    /// σ_{λμ} = −½φ_{λμ} + ½[(𝕕⌟φ)_λ τ_μ − (𝕕⌟φ)_μ τ_λ].
    fn sigma_from_phi<S: Real>(kin: &Kinematics<S>, phi: &[[S; 4]; 4]) -> [[S; 4]; 4] {
        let half = S::from_f64(0.5);
        let mut dphi = [S::zero(); 4];
        for m in 0..4 {
            for r in 0..4 {
                dphi[m] = dphi[m] + kin.dvec[r] * phi[r][m];
            }
        }
        let mut out = [[S::zero(); 4]; 4];
        for l in 0..4 {
            for m in 0..4 {
                out[l][m] = -half * phi[l][m]
                    + half * (dphi[l] * kin.tau[m] - dphi[m] * kin.tau[l]);
            }
        }
        out
    }
}

/// Vertical-valued perturbation Σ of a phase connection.
#[derive(Clone, Debug, PartialEq)]
pub enum SigmaSpec {
    /// Σ = (c²m/ħ)·ν_τ, the distinguished symmetric example.
    NuTau,
    /// Σ = (ν_τ ∘ g♯²)(σ): Σ^i_λ = (1/(cα⁰)) ḡ^{iρ} σ_{λρ}.
    FromSigmaTensor(SigmaTensorSpec),
    /// Closed-form test perturbation
    /// Σ^i_λ = A[i][λ] + B[i][λ]·sin(x⁰+2x¹) + C[i][λ]·x¹₀·x²₀.
    Poly {
        a: [[f64; 4]; 3],
        b: [[f64; 4]; 3],
        c: [[f64; 4]; 3],
    },
}

impl SigmaSpec {
    /// Σ^i_λ (indexed [i][λ]) at the point of `kin`.
    pub fn coeffs<S: Real>(
        &self,
        kin: &Kinematics<S>,
        xs: &[S],
        consts: &Constants,
    ) -> [[S; 4]; 3] {
        match self {
            SigmaSpec::NuTau => {
                let w = S::from_f64(consts.c * consts.mass / consts.hbar) * kin.alpha0.recip();
                let mut out = [[S::zero(); 4]; 3];
                for i in 0..3 {
                    for m in 0..4 {
                        out[i][m] = w * kin.dbar_i[i][m];
                    }
                }
                out
            }
            SigmaSpec::FromSigmaTensor(spec) => {
                let sigma = spec.components(kin, xs, consts);
                sigma_tensor_to_coeffs(kin, &sigma, consts)
            }
            SigmaSpec::Poly { a, b, c } => {
                let s = (xs[0] + S::from_f64(2.0) * xs[1]).sin();
                let vv = xs[4] * xs[5];
                let mut out = [[S::zero(); 4]; 3];
                for i in 0..3 {
                    for l in 0..4 {
                        out[i][l] = S::from_f64(a[i][l])
                            + S::from_f64(b[i][l]) * s
                            + S::from_f64(c[i][l]) * vv;
                    }
                }
                out
            }
        }
    }
}

/// Σ^i_λ = (1/(cα⁰)) ḡ^{iρ} σ_{λρ}.
pub fn sigma_tensor_to_coeffs<S: Real>(
    kin: &Kinematics<S>,
    sigma: &[[S; 4]; 4],
    consts: &Constants,
) -> [[S; 4]; 3] {
    let w = S::from_f64(1.0 / consts.c) * kin.alpha0.recip();
    let mut out = [[S::zero(); 4]; 3];
    for i in 0..3 {
        for l in 0..4 {
            let mut acc = S::zero();
            for r in 0..4 {
                acc = acc + kin.gbar_upi[i][r] * sigma[l][r];
            }
            out[i][l] = w * acc;
        }
    }
    out
}

/// Σ̲_{λμ} = c α⁰ ḡ_{iμ} Σ^i_λ, the (0,2) avatar whose symmetry governs
/// the survival of the contact structure.
pub fn sigma_bar<S: Real>(kin: &Kinematics<S>, coeffs: &[[S; 4]; 3]) -> [[S; 4]; 4] {
    let w = S::from_f64(kin.c) * kin.alpha0;
    let mut out = [[S::zero(); 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            let mut acc = S::zero();
            for i in 0..3 {
                acc = acc + kin.gbari[i][m] * coeffs[i][l];
            }
            out[l][m] = w * acc;
        }
    }
    out
}

/// [σ]_{λμ} = σ_{λμ} + (α⁰)² σ_{λρ} δ̄^ρ₀ ḡ_{0μ} (σ minus its 𝕕-trace
/// times τ in the second slot).
pub fn bracket_sigma<S: Real>(kin: &Kinematics<S>, sigma: &[[S; 4]; 4]) -> [[S; 4]; 4] {
    let a2 = kin.alpha0 * kin.alpha0;
    let mut out = [[S::zero(); 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            let mut tr = S::zero();
            for r in 0..4 {
                tr = tr + sigma[l][r] * kin.dbar0[r];
            }
            out[l][m] = sigma[l][m] + a2 * tr * kin.gbar0[m];
        }
    }
    out
}

/// Max |A − Aᵀ| of a 4×4 block (the alternation defect).
pub fn antisymmetry_defect(a: &[[f64; 4]; 4]) -> f64 {
    let mut worst = 0.0f64;
    for l in 0..4 {
        for m in 0..4 {
            worst = worst.max((a[l][m] - a[m][l]).abs());
        }
    }
    worst
}

/// L_Σ τ stored components: Σ^j_λ ∂⁰_j τ_μ antisymmetrized (c − cᵀ), from
/// jet-level kinematics.
pub fn lie_sigma_tau(kin: &Kinematics<Jet1>, coeffs: &[[Jet1; 4]; 3]) -> [[f64; 4]; 4] {
    let mut c = [[0.0; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            let mut acc = 0.0;
            for j in 0..3 {
                acc += coeffs[j][l].v * kin.tau[m].d[4 + j];
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

/// Catalog of EM fields by identifier.
pub fn em_field_from_id(id: &str, param: f64) -> Result<EmField, GeomError> {
    match id {
        "uniform" => Ok(EmField::Uniform { e: param }),
        "coulomb" => Ok(EmField::Coulomb { k: param }),
        other => Err(GeomError::OutsideDomain {
            reason: format!("unknown em field `{other}`"),
        }),
    }
}

pub fn em_catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("uniform", "F = E d0∧d1, constant; param: field strength E"),
        ("coulomb", "F = (k/r²) d0∧d1 on the Schwarzschild chart; param: k"),
    ]
}

/// Electromagnetic phase structure: Ω_em = Ω[g] + ½(q/m)F together with
/// its 2-vector and dynamical connection, all from the perturbed phase
/// connection Γ[g] + Σ(φ) with φ = ½(q/m)F. Fails when F is not closed.
pub fn em_structure(
    metric: &crate::metric::Metric,
    consts: &Constants,
    field: &EmField,
    q: f64,
    m: f64,
    p: &crate::phase::PhasePoint,
) -> Result<([[f64; 7]; 7], [[f64; 7]; 7], [f64; 7]), GeomError> {
    let res = field.closedness_residual(&p.x);
    if res > 1e-9 {
        return Err(GeomError::NotClosed { residual: res });
    }
    let conn = crate::structures::PhaseConnection::ChiPlusSigma {
        base: crate::connection::LinearConnection::LeviCivita(metric.clone()),
        sigma: SigmaSpec::FromSigmaTensor(SigmaTensorSpec::Em {
            field: field.clone(),
            q,
            m,
        }),
    };
    let so: crate::structures::StructureObjects<f64> =
        crate::structures::build(metric, consts, &conn, p)?;
    let mut gamma = [0.0; 7];
    gamma.copy_from_slice(&so.gamma7);
    Ok((so.omega, so.lambda, gamma))
}

/// Both sides of the regular-volume invariance
/// (−c²τ + A)∧Ω[g,Γ]³ = (−c²τ + A)∧Ω[g]³ — returns the two 7-form
/// coefficients (left: with Γ, right: with Γ[g]) for a spacetime 1-form A.
pub fn regular_volume_pair(
    metric: &crate::metric::Metric,
    consts: &Constants,
    conn: &crate::structures::PhaseConnection,
    a_form: &[f64; 4],
    p: &crate::phase::PhasePoint,
) -> Result<(f64, f64), GeomError> {
    use crate::tensor::{volume_coefficient_1222, Components, Variance};
    let so: crate::structures::StructureObjects<f64> =
        crate::structures::build(metric, consts, conn, p)?;
    let so_metric: crate::structures::StructureObjects<f64> = crate::structures::build(
        metric,
        consts,
        &crate::structures::PhaseConnection::metric_chi(metric),
        p,
    )?;
    let c2 = consts.c * consts.c;
    let mut one_form = [0.0; 7];
    for l in 0..4 {
        one_form[l] = -c2 * so.kin.tau[l] + a_form[l];
    }
    let at = [4usize, 5, 6, 0, 1, 2, 3];
    let om = Components::from_fn(
        vec![7, 7],
        vec![Variance::Co; 2],
        crate::structures::omega_scale(),
        |i| so.omega[i[0]][i[1]],
    );
    let om_g = Components::from_fn(
        vec![7, 7],
        vec![Variance::Co; 2],
        crate::structures::omega_scale(),
        |i| so_metric.omega[i[0]][i[1]],
    );
    let lhs = volume_coefficient_1222(&one_form, &om, &at);
    let rhs = volume_coefficient_1222(&one_form, &om_g, &at);
    Ok((lhs, rhs))
}
