//! Deterministic phase-point sampling: a counter-based generator keyed by
//! seed draws base coordinates in the per-metric ranges and a physical
//! velocity in a ball of radius 0.7, mapped to chart velocities through
//! the spatial metric; inadmissible draws are rejected and resampled up to
//! ten times the requested count.

use crate::error::GeomError;
use crate::metric::Metric;
use crate::phase::{chart_velocity_from_physical, Constants, Kinematics, PhasePoint};
use crate::tangent::TangentPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VELOCITY_BALL_RADIUS: f64 = 0.7;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.gen::<f64>()
    }

    /// Draw one candidate phase point (possibly inadmissible).
    fn candidate(&mut self, metric: &Metric) -> Option<PhasePoint> {
        let ranges = metric.sample_ranges();
        let x = [
            self.in_range(ranges[0].0, ranges[0].1),
            self.in_range(ranges[1].0, ranges[1].1),
            self.in_range(ranges[2].0, ranges[2].1),
            self.in_range(ranges[3].0, ranges[3].1),
        ];
        // uniform in the ball of radius 0.7 (physical speed)
        let u = loop {
            let u = [
                self.in_range(-1.0, 1.0),
                self.in_range(-1.0, 1.0),
                self.in_range(-1.0, 1.0),
            ];
            let n2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
            if n2 <= 1.0 {
                break [
                    u[0] * VELOCITY_BALL_RADIUS,
                    u[1] * VELOCITY_BALL_RADIUS,
                    u[2] * VELOCITY_BALL_RADIUS,
                ];
            }
        };
        let v = chart_velocity_from_physical(metric, &x, &u)?;
        Some(PhasePoint { x, v })
    }

    /// `count` admissible phase points; error when the rejection budget
    /// (10× count) is exhausted.
    pub fn phase_points(
        &mut self,
        metric: &Metric,
        consts: &Constants,
        count: usize,
    ) -> Result<Vec<PhasePoint>, GeomError> {
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0usize;
        while out.len() < count {
            attempts += 1;
            if attempts > 10 * count.max(1) {
                return Err(GeomError::OutsideDomain {
                    reason: format!(
                        "sampling budget exhausted: {} admissible of {} requested",
                        out.len(),
                        count
                    ),
                });
            }
            if let Some(p) = self.candidate(metric) {
                // admissibility + conditioning guards; also the normalized
                // contact-vector check g(𝕕,𝕕)/(−c²) ∈ [0.999, 1.001]
                if let Ok(kin) = Kinematics::<f64>::new(metric, consts, &p) {
                    let ratio = -kin.g_dot(&kin.dvec, &kin.dvec) / (consts.c * consts.c);
                    if (0.999..=1.001).contains(&ratio) {
                        out.push(p);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Tangent-chart points: base coordinates in range, ẋ in a box with a
    /// timelike-ish ẋ⁰ component (the tangent objects need no constraint).
    pub fn tangent_points(&mut self, metric: &Metric, count: usize) -> Vec<TangentPoint> {
        let ranges = metric.sample_ranges();
        (0..count)
            .map(|_| {
                let x = [
                    self.in_range(ranges[0].0, ranges[0].1),
                    self.in_range(ranges[1].0, ranges[1].1),
                    self.in_range(ranges[2].0, ranges[2].1),
                    self.in_range(ranges[3].0, ranges[3].1),
                ];
                let xdot = [
                    self.in_range(0.8, 1.2),
                    self.in_range(-0.3, 0.3),
                    self.in_range(-0.1, 0.1),
                    self.in_range(-0.1, 0.1),
                ];
                TangentPoint { x, xdot }
            })
            .collect()
    }
}
