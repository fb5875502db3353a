//! Spacetime connections: Levi-Civita, explicit tables, and non-metric
//! perturbations K = K[g] + Φ, together with their torsion, curvature and
//! differential operators.
//!
//! Index conventions for stored arrays follow the coefficient bundles:
//! K[λ][ν][μ] = K_λ^ν_μ (form index, upper index, lower index). The sign
//! convention makes K the negative of the textbook Christoffel symbol.

use crate::error::GeomError;
use crate::jet::{seed1, seed2, Jet1, Real};
use crate::linalg::{det4, inv4};
use crate::metric::Metric;

/// Metric data at a point: components, inverse, first partials ∂_a g_{bc}
/// and the determinant, all at scalar level `S`.
#[derive(Clone)]
pub struct MetricData<S> {
    pub g: [[S; 4]; 4],
    pub ginv: [[S; 4]; 4],
    /// dg[a][b][c] = ∂_a g_{bc}; only the four spacetime axes can be hit.
    pub dg: [[[S; 4]; 4]; 4],
    pub det: S,
}

/// Scalar levels at which geometry can be evaluated. The metric exposes
/// exact partials one order above the level, so every derived quantity at
/// level `S` (values for `f64`, values plus first partials for `Jet1`)
/// is assembled without truncation error.
pub trait AdLevel: Real {
    /// Metric data at `coords[0..4]`, seeded over a chart of `chart_dim`
    /// coordinates (4 = spacetime, 7 = phase, 8 = tangent).
    fn metric_data(metric: &Metric, chart_dim: usize, coords: &[f64]) -> Result<MetricData<Self>, GeomError>;
    /// The chart coordinates themselves at this level.
    fn seed_coords(chart_dim: usize, coords: &[f64]) -> Vec<Self>;
}

impl AdLevel for f64 {
    fn metric_data(metric: &Metric, chart_dim: usize, coords: &[f64]) -> Result<MetricData<f64>, GeomError> {
        assert!(coords.len() >= 4 && coords.len() == chart_dim);
        let xj: Vec<Jet1> = seed1(coords);
        let x4 = [xj[0], xj[1], xj[2], xj[3]];
        let gj = metric.components(&x4);
        let mut g = [[0.0; 4]; 4];
        let mut dg = [[[0.0; 4]; 4]; 4];
        for b in 0..4 {
            for c in 0..4 {
                g[b][c] = gj[b][c].v;
                for a in 0..4 {
                    dg[a][b][c] = gj[b][c].d[a];
                }
            }
        }
        let det = det4(&g);
        let ginv = inv4(&g).ok_or(GeomError::SingularMetric { det })?;
        Ok(MetricData { g, ginv, dg, det })
    }

    fn seed_coords(_chart_dim: usize, coords: &[f64]) -> Vec<f64> {
        coords.to_vec()
    }
}

impl AdLevel for Jet1 {
    fn metric_data(metric: &Metric, chart_dim: usize, coords: &[f64]) -> Result<MetricData<Jet1>, GeomError> {
        assert!(coords.len() >= 4 && coords.len() == chart_dim);
        let xj = seed2(coords);
        let x4 = [xj[0], xj[1], xj[2], xj[3]];
        let gj = metric.components(&x4);
        let mut g = [[Jet1::constant(chart_dim, 0.0); 4]; 4];
        let mut dg = [[[Jet1::constant(chart_dim, 0.0); 4]; 4]; 4];
        for b in 0..4 {
            for c in 0..4 {
                g[b][c] = gj[b][c].lower();
                for a in 0..4 {
                    dg[a][b][c] = gj[b][c].partial(a);
                }
            }
        }
        let det = det4(&g);
        let ginv = inv4(&g).ok_or(GeomError::SingularMetric { det: det.val() })?;
        Ok(MetricData { g, ginv, dg, det })
    }

    fn seed_coords(chart_dim: usize, coords: &[f64]) -> Vec<Jet1> {
        let _ = chart_dim;
        seed1(coords)
    }
}

/// Closed-form spacetime 1-form ψ_μ(x) = c_μ + a_μ·sin(x⁰ + 2x¹).
#[derive(Clone, Debug, PartialEq)]
pub struct CovectorSpec {
    pub constant: [f64; 4],
    pub sin_amp: [f64; 4],
}

impl CovectorSpec {
    pub fn constant(c: [f64; 4]) -> CovectorSpec {
        CovectorSpec {
            constant: c,
            sin_amp: [0.0; 4],
        }
    }

    pub fn eval<S: Real>(&self, x: &[S; 4]) -> [S; 4] {
        let s = (x[0] + S::from_f64(2.0) * x[1]).sin();
        let mut out = [S::zero(); 4];
        for mu in 0..4 {
            out[mu] = S::from_f64(self.constant[mu]) + S::from_f64(self.sin_amp[mu]) * s;
        }
        out
    }
}

/// Smooth scalar modulation factor for table-based tensors.
#[derive(Clone, Debug, PartialEq)]
pub enum Modulation {
    Const,
    /// 1 + amp·sin(x⁰ + x¹)
    Sinusoid { amp: f64 },
}

impl Modulation {
    pub fn eval<S: Real>(&self, x: &[S; 4]) -> S {
        match self {
            Modulation::Const => S::one(),
            Modulation::Sinusoid { amp } => {
                S::one() + S::from_f64(*amp) * (x[0] + x[1]).sin()
            }
        }
    }
}

/// Linear difference tensor Φ specified through the (0,3) tensor
/// φ_{λρμ} = g♭(Φ̄) with Φ_λ^ν_μ = g^{νρ} φ_{λρμ}.
#[derive(Clone, Debug, PartialEq)]
pub enum PhiField {
    /// φ_{λρμ} = table[λ][ρ][μ] · modulation(x)
    Table {
        table: [[[f64; 4]; 4]; 4],
        modulation: Modulation,
    },
    /// Projective family: φ = g⊙ψ, i.e. φ_{λρμ} = g_{ρλ}ψ_μ + g_{ρμ}ψ_λ,
    /// equivalently Φ_λ^ν_μ = δ^ν_λ ψ_μ + δ^ν_μ ψ_λ.
    Projective { psi: CovectorSpec },
}

impl PhiField {
    /// φ_{λρμ} at a point.
    pub fn phi<S: Real>(&self, g: &[[S; 4]; 4], x: &[S; 4]) -> [[[S; 4]; 4]; 4] {
        let mut out = [[[S::zero(); 4]; 4]; 4];
        match self {
            PhiField::Table { table, modulation } => {
                let m = modulation.eval(x);
                for l in 0..4 {
                    for r in 0..4 {
                        for u in 0..4 {
                            out[l][r][u] = S::from_f64(table[l][r][u]) * m;
                        }
                    }
                }
            }
            PhiField::Projective { psi } => {
                let p = psi.eval(x);
                for l in 0..4 {
                    for r in 0..4 {
                        for u in 0..4 {
                            out[l][r][u] = g[r][l] * p[u] + g[r][u] * p[l];
                        }
                    }
                }
            }
        }
        out
    }

    /// Coefficients Φ_λ^ν_μ = g^{νρ} φ_{λρμ}.
    pub fn coeffs<S: Real>(&self, md: &MetricData<S>, x: &[S; 4]) -> [[[S; 4]; 4]; 4] {
        let phi = self.phi(&md.g, x);
        let mut out = [[[S::zero(); 4]; 4]; 4];
        for l in 0..4 {
            for n in 0..4 {
                for u in 0..4 {
                    let mut acc = S::zero();
                    for r in 0..4 {
                        acc = acc + md.ginv[n][r] * phi[l][r][u];
                    }
                    out[l][n][u] = acc;
                }
            }
        }
        out
    }
}

/// Linear spacetime connection (coefficients depend on x only).
#[derive(Clone, Debug, PartialEq)]
pub enum LinearConnection {
    Zero,
    LeviCivita(Metric),
    /// Constant coefficient table K_λ^ν_μ = table[λ][ν][μ].
    Table { table: [[[f64; 4]; 4]; 4] },
    /// K = base + Φ.
    Perturbed {
        base: Box<LinearConnection>,
        phi: PhiField,
    },
}

/// Levi-Civita coefficients K_λ^ν_μ = −½ g^{νρ}(∂_λ g_{ρμ} + ∂_μ g_{ρλ} − ∂_ρ g_{λμ}).
pub fn levi_civita_coeffs<S: Real>(md: &MetricData<S>) -> [[[S; 4]; 4]; 4] {
    let half = S::from_f64(0.5);
    let mut k = [[[S::zero(); 4]; 4]; 4];
    for l in 0..4 {
        for n in 0..4 {
            for u in 0..4 {
                let mut acc = S::zero();
                for r in 0..4 {
                    acc = acc + md.ginv[n][r] * (md.dg[l][r][u] + md.dg[u][r][l] - md.dg[r][l][u]);
                }
                k[l][n][u] = -half * acc;
            }
        }
    }
    k
}

impl LinearConnection {
    /// Coefficients K_λ^ν_μ at `coords[0..4]`, at AD level `S`. The chart
    /// may be larger than spacetime (phase/tangent charts) so that the
    /// returned jets carry partials with respect to all chart coordinates.
    pub fn coeffs<S: AdLevel>(
        &self,
        chart_dim: usize,
        coords: &[f64],
    ) -> Result<[[[S; 4]; 4]; 4], GeomError> {
        match self {
            LinearConnection::Zero => Ok([[[S::zero(); 4]; 4]; 4]),
            LinearConnection::LeviCivita(metric) => {
                let md = S::metric_data(metric, chart_dim, coords)?;
                Ok(levi_civita_coeffs(&md))
            }
            LinearConnection::Table { table } => {
                let mut k = [[[S::zero(); 4]; 4]; 4];
                for l in 0..4 {
                    for n in 0..4 {
                        for u in 0..4 {
                            k[l][n][u] = S::from_f64(table[l][n][u]);
                        }
                    }
                }
                Ok(k)
            }
            LinearConnection::Perturbed { base, phi } => {
                let mut k = base.coeffs::<S>(chart_dim, coords)?;
                // Φ must be lowered/raised with the metric of the base
                // Levi-Civita part when present; fall back to Minkowski.
                let metric = base.metric().unwrap_or(Metric::Minkowski);
                let md = S::metric_data(&metric, chart_dim, coords)?;
                let xs = S::seed_coords(chart_dim, coords);
                let x4 = [xs[0], xs[1], xs[2], xs[3]];
                let p = phi.coeffs(&md, &x4);
                for l in 0..4 {
                    for n in 0..4 {
                        for u in 0..4 {
                            k[l][n][u] = k[l][n][u] + p[l][n][u];
                        }
                    }
                }
                Ok(k)
            }
        }
    }

    /// The metric underlying the Levi-Civita part, when there is one.
    pub fn metric(&self) -> Option<Metric> {
        match self {
            LinearConnection::LeviCivita(m) => Some(m.clone()),
            LinearConnection::Perturbed { base, .. } => base.metric(),
            _ => None,
        }
    }
}

/// Torsion T^ν_{λμ} = −(K_λ^ν_μ − K_μ^ν_λ), stored [ν][λ][μ].
pub fn torsion<S: Real>(k: &[[[S; 4]; 4]; 4]) -> [[[S; 4]; 4]; 4] {
    let mut t = [[[S::zero(); 4]; 4]; 4];
    for n in 0..4 {
        for l in 0..4 {
            for u in 0..4 {
                t[n][l][u] = -(k[l][n][u] - k[u][n][l]);
            }
        }
    }
    t
}

/// Curvature tensor R_{λμ}^ν_σ stored [λ][μ][ν][σ], antisymmetric in (λ,μ):
/// the antisymmetrization of −2(∂_λ K_μ^ν_σ + K_λ^ρ_σ K_μ^ν_ρ).
pub fn curvature(k: &[[[Jet1; 4]; 4]; 4]) -> [[[[f64; 4]; 4]; 4]; 4] {
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                for s in 0..4 {
                    let mut c_lm = k[m][n][s].d[l];
                    let mut c_ml = k[l][n][s].d[m];
                    for rho in 0..4 {
                        c_lm += k[l][rho][s].v * k[m][n][rho].v;
                        c_ml += k[m][rho][s].v * k[l][n][rho].v;
                    }
                    r[l][m][n][s] = -(c_lm - c_ml);
                }
            }
        }
    }
    r
}

/// Covariant derivative of the metric, ∇_λ g_{μν} = ∂_λ g_{μν}
/// + g_{ρν} K_λ^ρ_μ + g_{μρ} K_λ^ρ_ν, stored [λ][μ][ν].
pub fn nabla_g<S: Real>(md: &MetricData<S>, k: &[[[S; 4]; 4]; 4]) -> [[[S; 4]; 4]; 4] {
    let mut ng = [[[S::zero(); 4]; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                let mut acc = md.dg[l][m][n];
                for r in 0..4 {
                    acc = acc + md.g[r][n] * k[l][r][m] + md.g[m][r] * k[l][r][n];
                }
                ng[l][m][n] = acc;
            }
        }
    }
    ng
}

/// Covariant exterior differential of g as a T*E-valued 2-form:
/// d_K g stored [λ][μ][ρ] = 2·(c_{λμρ} − c_{μλρ}) with
/// c_{λμρ} = ∂_λ g_{μρ} + g_{σμ} K_λ^σ_ρ, so that L_K g♭ ≅ ½ d_K g holds
/// exactly in stored components.
pub fn d_k_g<S: Real>(md: &MetricData<S>, k: &[[[S; 4]; 4]; 4]) -> [[[S; 4]; 4]; 4] {
    let mut c = [[[S::zero(); 4]; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            for r in 0..4 {
                let mut acc = md.dg[l][m][r];
                for s in 0..4 {
                    acc = acc + md.g[s][m] * k[l][s][r];
                }
                c[l][m][r] = acc;
            }
        }
    }
    let mut out = [[[S::zero(); 4]; 4]; 4];
    let two = S::from_f64(2.0);
    for l in 0..4 {
        for m in 0..4 {
            for r in 0..4 {
                out[l][m][r] = two * (c[l][m][r] - c[m][l][r]);
            }
        }
    }
    out
}

/// Invariant evaluation d_K g(X,Y)(Z) = (∇_X g)(Y,Z) − (∇_Y g)(X,Z)
/// + g(T(X,Y), Z); equals ½ of the stored array contracted with X,Y,Z.
pub fn d_k_g_eval(
    md: &MetricData<f64>,
    k: &[[[f64; 4]; 4]; 4],
    x: &[f64; 4],
    y: &[f64; 4],
    z: &[f64; 4],
) -> f64 {
    let ng = nabla_g(md, k);
    let t = torsion(k);
    let mut acc = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                acc += ng[a][b][c] * (x[a] * y[b] - y[a] * x[b]) * z[c];
            }
        }
    }
    let mut txy = [0.0; 4];
    for n in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                txy[n] += t[n][a][b] * x[a] * y[b];
            }
        }
    }
    let mut gtz = 0.0;
    for n in 0..4 {
        for c in 0..4 {
            gtz += md.g[n][c] * txy[n] * z[c];
        }
    }
    acc + gtz
}
