//! Random instance stream: points and short convex chains sampled from a
//! parabola that drifts toward the origin as insertions accumulate.

use rand::distributions::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{ParetoElement, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("generator already produced all {0} elements")]
    Exhausted(usize),
    #[error("invalid generator config: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub n_total: usize,
    pub mu: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(n_total: usize, mu: f64, seed: u64) -> Result<Self, GeneratorError> {
        if n_total == 0 {
            return Err(GeneratorError::InvalidConfig("n_total must be at least 1"));
        }
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(GeneratorError::InvalidConfig("mu must be finite and non-negative"));
        }
        Ok(GeneratorConfig { n_total, mu, seed })
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorState {
    config: GeneratorConfig,
    k: f64,
    emitted: usize,
    rng: ChaCha8Rng,
}

/// Parabola sample for parameter `r` at drift `k`.
pub fn parabola_point(r: f64, k: f64) -> Point {
    Point::new(r + (5.0 - k), (10.5 - r).powi(2) / 5.0 - k)
}

impl GeneratorState {
    pub fn new(config: GeneratorConfig) -> Self {
        GeneratorState {
            config,
            k: 1.0,
            emitted: 0,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    pub fn is_exhausted(&self) -> bool {
        self.emitted >= self.config.n_total
    }

    /// One point, or the segments of a chain of up to six parabola samples.
    /// The final batch is cut short so exactly `n_total` elements come out.
    pub fn next_batch(&mut self) -> Result<Vec<ParetoElement>, GeneratorError> {
        if self.is_exhausted() {
            return Err(GeneratorError::Exhausted(self.config.n_total));
        }
        let i: usize = self.rng.gen_range(1..=6);
        let r1 = 10.0 * open01(&mut self.rng);
        let mut rs = vec![r1];
        for _ in 1..i {
            let c = open01(&mut self.rng);
            rs.push(rs[rs.len() - 1] + c);
        }
        let mut pts: Vec<Point> = rs.iter().map(|&r| parabola_point(r, self.k)).collect();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x));

        let mut batch: Vec<ParetoElement> = if pts.len() == 1 {
            vec![ParetoElement::point(pts[0].x, pts[0].y)]
        } else {
            // past the vertex a chord slopes upward; from_endpoints trims it
            pts.windows(2)
                .map(|w| ParetoElement::from_endpoints(w[0], w[1]).expect("finite samples"))
                .collect()
        };
        batch.truncate(self.config.n_total - self.emitted);
        self.emitted += batch.len();
        self.k += self.config.mu / self.config.n_total as f64;
        Ok(batch)
    }
}

fn open01(rng: &mut ChaCha8Rng) -> f64 {
    Open01.sample(rng)
}

impl Iterator for GeneratorState {
    type Item = Vec<ParetoElement>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_batch().ok()
    }
}
