//! The differentiation contract every component field satisfies: values
//! plus first and second partial derivatives over its chart, exact to
//! machine precision through forward-mode jets.

use crate::connection::LinearConnection;
use crate::error::GeomError;
use crate::jet::{seed2, Jet2, Real};
use crate::metric::Metric;
use crate::scale::ScaleDim;
use crate::tensor::{Components, Variance};

/// A smooth component-valued field over a 4- or 7-dimensional chart,
/// exposing values and first and second partials.
pub trait FieldProvider: Send + Sync {
    fn chart_dim(&self) -> usize;
    fn shape(&self) -> Vec<usize>;
    fn variance(&self) -> Vec<Variance>;
    fn scale(&self) -> ScaleDim;
    /// Components as second-order jets at the point.
    fn eval_jets(&self, x: &[f64]) -> Result<Vec<Jet2>, GeomError>;

    fn eval(&self, x: &[f64]) -> Result<Components, GeomError> {
        let jets = self.eval_jets(x)?;
        Ok(Components {
            shape: self.shape(),
            variance: self.variance(),
            data: jets.iter().map(|j| j.v).collect(),
            scale: self.scale(),
        })
    }

    fn d1(&self, x: &[f64], axis: usize) -> Result<Components, GeomError> {
        let jets = self.eval_jets(x)?;
        Ok(Components {
            shape: self.shape(),
            variance: self.variance(),
            data: jets.iter().map(|j| j.d[axis]).collect(),
            scale: self.scale(),
        })
    }

    fn d2(&self, x: &[f64], a: usize, b: usize) -> Result<Components, GeomError> {
        let jets = self.eval_jets(x)?;
        Ok(Components {
            shape: self.shape(),
            variance: self.variance(),
            data: jets.iter().map(|j| j.dd[a][b]).collect(),
            scale: self.scale(),
        })
    }
}

/// Metric components g_{λμ} as a provider over the spacetime chart.
pub struct MetricField(pub Metric);

impl FieldProvider for MetricField {
    fn chart_dim(&self) -> usize {
        4
    }
    fn shape(&self) -> Vec<usize> {
        vec![4, 4]
    }
    fn variance(&self) -> Vec<Variance> {
        vec![Variance::Co, Variance::Co]
    }
    fn scale(&self) -> ScaleDim {
        ScaleDim::metric()
    }
    fn eval_jets(&self, x: &[f64]) -> Result<Vec<Jet2>, GeomError> {
        let xs = seed2(x);
        let x4 = [xs[0], xs[1], xs[2], xs[3]];
        let g = self.0.components(&x4);
        let mut out = Vec::with_capacity(16);
        for row in &g {
            for v in row {
                out.push(*v);
            }
        }
        Ok(out)
    }
}

/// Dual metric g^{λμ}.
pub struct InverseMetricField(pub Metric);

impl FieldProvider for InverseMetricField {
    fn chart_dim(&self) -> usize {
        4
    }
    fn shape(&self) -> Vec<usize> {
        vec![4, 4]
    }
    fn variance(&self) -> Vec<Variance> {
        vec![Variance::Contra, Variance::Contra]
    }
    fn scale(&self) -> ScaleDim {
        -ScaleDim::metric()
    }
    fn eval_jets(&self, x: &[f64]) -> Result<Vec<Jet2>, GeomError> {
        let xs = seed2(x);
        let x4 = [xs[0], xs[1], xs[2], xs[3]];
        let ginv = self.0.inverse(&x4)?;
        let mut out = Vec::with_capacity(16);
        for row in &ginv {
            for v in row {
                out.push(*v);
            }
        }
        Ok(out)
    }
}

/// Connection coefficients K_λ^ν_μ. First partials are exact (assembled
/// through second-order metric jets); the unused second partials fall back
/// to central differences of the exact first partials.
pub struct ConnectionField(pub LinearConnection);

impl FieldProvider for ConnectionField {
    fn chart_dim(&self) -> usize {
        4
    }
    fn shape(&self) -> Vec<usize> {
        vec![4, 4, 4]
    }
    fn variance(&self) -> Vec<Variance> {
        vec![Variance::Co, Variance::Contra, Variance::Co]
    }
    fn scale(&self) -> ScaleDim {
        ScaleDim::DIMENSIONLESS
    }
    fn eval_jets(&self, x: &[f64]) -> Result<Vec<Jet2>, GeomError> {
        use crate::jet::Jet1;
        let k: [[[Jet1; 4]; 4]; 4] = self.0.coeffs(4, x)?;
        let h = 1e-5;
        let mut out = Vec::with_capacity(64);
        for l in 0..4 {
            for n in 0..4 {
                for u in 0..4 {
                    let mut j2 = Jet2::constant(4, k[l][n][u].v);
                    for a in 0..4 {
                        j2.d[a] = k[l][n][u].d[a];
                    }
                    for a in 0..4 {
                        let mut xp = [x[0], x[1], x[2], x[3]];
                        let mut xm = xp;
                        xp[a] += h;
                        xm[a] -= h;
                        let kp: [[[Jet1; 4]; 4]; 4] = self.0.coeffs(4, &xp)?;
                        let km: [[[Jet1; 4]; 4]; 4] = self.0.coeffs(4, &xm)?;
                        for b in 0..4 {
                            j2.dd[a][b] = (kp[l][n][u].d[b] - km[l][n][u].d[b]) / (2.0 * h);
                        }
                    }
                    out.push(j2);
                }
            }
        }
        Ok(out)
    }
}

/// Relative-error comparison of the provider's d1 against central
/// differences of eval at step h = max(1,|xᵃ|)·ε^{1/3}; returns the worst
/// relative error over components and axes.
pub fn validate_d1(provider: &dyn FieldProvider, x: &[f64]) -> Result<f64, GeomError> {
    let mut worst = 0.0f64;
    for axis in 0..provider.chart_dim() {
        let h = x[axis].abs().max(1.0) * f64::EPSILON.powf(1.0 / 3.0);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[axis] += h;
        xm[axis] -= h;
        let fp = provider.eval(&xp)?;
        let fm = provider.eval(&xm)?;
        let d = provider.d1(x, axis)?;
        let scale = d.max_abs().max(fp.max_abs()).max(1.0);
        for (k, dv) in d.data.iter().enumerate() {
            let fd = (fp.data[k] - fm.data[k]) / (2.0 * h);
            worst = worst.max((dv - fd).abs() / scale);
        }
    }
    Ok(worst)
}

/// Same for d2 against second-order central differences; also checks the
/// Clairaut symmetry of the provider's mixed partials.
pub fn validate_d2(provider: &dyn FieldProvider, x: &[f64]) -> Result<f64, GeomError> {
    let mut worst = 0.0f64;
    let n = provider.chart_dim();
    let f0 = provider.eval(x)?;
    for a in 0..n {
        let h = x[a].abs().max(1.0) * 3e-4;
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[a] += h;
        xm[a] -= h;
        let fp = provider.eval(&xp)?;
        let fm = provider.eval(&xm)?;
        let d2 = provider.d2(x, a, a)?;
        let scale = f0.max_abs().max(d2.max_abs()).max(1.0);
        for (k, dv) in d2.data.iter().enumerate() {
            let fd = (fp.data[k] - 2.0 * f0.data[k] + fm.data[k]) / (h * h);
            worst = worst.max((dv - fd).abs() / scale);
        }
        for b in 0..n {
            let dab = provider.d2(x, a, b)?;
            let dba = provider.d2(x, b, a)?;
            worst = worst.max(dab.max_abs_diff(&dba) / scale);
        }
    }
    Ok(worst)
}
