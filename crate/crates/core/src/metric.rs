//! Lorentzian metric catalog with closed-form components, signature (−+++),
//! time-oriented charts (∂₀ timelike, g₀₀ < 0 on the whole domain).

use crate::error::{CatalogError, GeomError};
use crate::jet::Real;
use crate::linalg::{det4, inv4};
use crate::scale::ScaleDim;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub enum Metric {
    /// diag(−1, 1, 1, 1)
    Minkowski,
    /// Coordinates (t, r, θ, φ), domain r > rs, 0 < θ < π.
    Schwarzschild { rs: f64 },
    /// diag(−1−ε·sin x¹, 1, 1, 1+ε·cos x⁰): analytic, generic derivatives.
    Wavy { eps: f64 },
    /// Constant Lorentzian matrix (tests: randomly perturbed flat metrics).
    ConstLorentz { g: [[f64; 4]; 4] },
}

impl Metric {
    pub fn components<S: Real>(&self, x: &[S; 4]) -> [[S; 4]; 4] {
        let mut g = [[S::zero(); 4]; 4];
        match self {
            Metric::Minkowski => {
                g[0][0] = -S::one();
                g[1][1] = S::one();
                g[2][2] = S::one();
                g[3][3] = S::one();
            }
            Metric::Schwarzschild { rs } => {
                let rs = S::from_f64(*rs);
                let r = x[1];
                let theta = x[2];
                let f = S::one() - rs / r;
                g[0][0] = -f;
                g[1][1] = f.recip();
                g[2][2] = r * r;
                let st = theta.sin();
                g[3][3] = r * r * st * st;
            }
            Metric::Wavy { eps } => {
                let e = S::from_f64(*eps);
                g[0][0] = -(S::one() + e * x[1].sin());
                g[1][1] = S::one();
                g[2][2] = S::one();
                g[3][3] = S::one() + e * x[0].cos();
            }
            Metric::ConstLorentz { g: m } => {
                for i in 0..4 {
                    for j in 0..4 {
                        g[i][j] = S::from_f64(m[i][j]);
                    }
                }
            }
        }
        g
    }

    /// Dual metric ḡ^{λμ}; fails on singular g.
    pub fn inverse<S: Real>(&self, x: &[S; 4]) -> Result<[[S; 4]; 4], GeomError> {
        let g = self.components(x);
        inv4(&g).ok_or(GeomError::SingularMetric {
            det: det4(&g).val(),
        })
    }

    pub fn det<S: Real>(&self, x: &[S; 4]) -> S {
        det4(&self.components(x))
    }

    pub fn scale(&self) -> ScaleDim {
        ScaleDim::metric()
    }

    /// Chart-domain guard for sampling and admissibility checks.
    pub fn domain_ok(&self, x: &[f64; 4]) -> bool {
        match self {
            Metric::Schwarzschild { rs } => x[1] > *rs && x[2] > 0.0 && x[2] < std::f64::consts::PI,
            _ => true,
        }
    }

    /// Per-coordinate sampling ranges.
    pub fn sample_ranges(&self) -> [(f64, f64); 4] {
        match self {
            Metric::Minkowski | Metric::ConstLorentz { .. } => {
                [(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)]
            }
            Metric::Schwarzschild { rs } => [
                (0.0, 10.0),
                (2.5 * rs, 10.0 * rs),
                (0.3, std::f64::consts::PI - 0.3),
                (0.0, 2.0 * std::f64::consts::PI),
            ],
            Metric::Wavy { .. } => [
                (-3.0, 3.0),
                (-3.0, 3.0),
                (-1.0, 1.0),
                (-1.0, 1.0),
            ],
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Metric::Minkowski => "minkowski",
            Metric::Schwarzschild { .. } => "schwarzschild",
            Metric::Wavy { .. } => "wavy",
            Metric::ConstLorentz { .. } => "const_lorentz",
        }
    }
}

/// Catalog lookup by identifier and parameter map.
pub fn metric_from_id(id: &str, params: &BTreeMap<String, f64>) -> Result<Metric, CatalogError> {
    match id {
        "minkowski" => Ok(Metric::Minkowski),
        "schwarzschild" => {
            let rs = *params.get("rs").unwrap_or(&1.0);
            if rs <= 0.0 {
                return Err(CatalogError::InvalidParam {
                    name: "rs".into(),
                    reason: "Schwarzschild radius must be positive".into(),
                });
            }
            Ok(Metric::Schwarzschild { rs })
        }
        "wavy" => {
            let eps = *params.get("eps").unwrap_or(&0.1);
            if eps.abs() >= 0.9 {
                return Err(CatalogError::InvalidParam {
                    name: "eps".into(),
                    reason: "|eps| must stay below 0.9 to keep the signature".into(),
                });
            }
            Ok(Metric::Wavy { eps })
        }
        other => Err(CatalogError::UnknownId(other.into())),
    }
}

/// Names and parameters of the CLI-visible metric catalog.
pub fn metric_catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("minkowski", "flat metric diag(-1,1,1,1); no parameters"),
        ("schwarzschild", "params: rs (default 1.0); chart (t,r,theta,phi), domain r > rs"),
        ("wavy", "params: eps (default 0.1); diag(-1-eps sin x1, 1, 1, 1+eps cos x0)"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minkowski_inverse_is_itself() {
        let x = [0.0; 4];
        let inv = Metric::Minkowski.inverse(&x).unwrap();
        assert_eq!(inv[0][0], -1.0);
        assert_eq!(inv[1][1], 1.0);
        assert_eq!(inv[2][3], 0.0);
    }

    #[test]
    fn schwarzschild_inverse_tt() {
        // r_s = 1, r = 3: g_tt = −2/3 so the direct-inversion oracle gives −3/2.
        let m = Metric::Schwarzschild { rs: 1.0 };
        let x = [0.0, 3.0, std::f64::consts::FRAC_PI_2, 0.0];
        let inv = m.inverse(&x).unwrap();
        assert!((inv[0][0] + 1.5).abs() < 1e-14);
    }

    #[test]
    fn random_const_lorentz_inverse_roundtrip() {
        let mut g = [[0.0; 4]; 4];
        g[0][0] = -1.1;
        g[1][1] = 1.0;
        g[2][2] = 0.9;
        g[3][3] = 1.2;
        g[0][1] = 0.05;
        g[1][0] = 0.05;
        g[2][3] = -0.1;
        g[3][2] = -0.1;
        let m = Metric::ConstLorentz { g };
        let x = [0.0; 4];
        let gm = m.components(&x);
        let inv = m.inverse(&x).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0.0;
                for k in 0..4 {
                    s += gm[i][k] * inv[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s - expect).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn catalog_lookup() {
        let mut p = BTreeMap::new();
        p.insert("rs".to_string(), 2.0);
        assert_eq!(
            metric_from_id("schwarzschild", &p).unwrap(),
            Metric::Schwarzschild { rs: 2.0 }
        );
        assert!(metric_from_id("kerr", &p).is_err());
    }

    #[test]
    fn timelike_chart_on_domains() {
        for m in [
            Metric::Minkowski,
            Metric::Schwarzschild { rs: 1.0 },
            Metric::Wavy { eps: 0.3 },
        ] {
            let r = m.sample_ranges();
            let mid = [
                0.5 * (r[0].0 + r[0].1),
                0.5 * (r[1].0 + r[1].1),
                0.5 * (r[2].0 + r[2].1),
                0.5 * (r[3].0 + r[3].1),
            ];
            let g = m.components(&mid);
            assert!(g[0][0] < 0.0, "g00 must be negative for {m:?}");
            assert!(m.det(&mid) < 0.0);
        }
    }
}
