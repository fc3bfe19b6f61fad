use super::linear::solve_linear;
use super::{EstimationResult, EstimatorConfig};
use crate::correspondence::{Correspondence, CorrespondenceSet};
use crate::error::{EpiError, Result};
use crate::geometry::{symmetric_epipolar_distance, FundamentalMatrix};
use crate::rng::Prng;

const SAMPLE_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Support {
    count: usize,
    /// SED summed over the inliers.
    total: f64,
}

impl Support {
    fn beats(&self, other: &Support) -> bool {
        self.count > other.count || (self.count == other.count && self.total < other.total)
    }
}

fn support(f: &FundamentalMatrix, pairs: &[Correspondence], threshold: f64) -> (Support, Vec<bool>) {
    let mut s = Support {
        count: 0,
        total: 0.0,
    };
    let mask = pairs
        .iter()
        .map(|p| match symmetric_epipolar_distance(f, p.m, p.m_prime) {
            Ok(d) if d < threshold => {
                s.count += 1;
                s.total += d;
                true
            }
            _ => false,
        })
        .collect();
    (s, mask)
}

/// Random-sample consensus over minimal 8-point samples.
///
/// Runs exactly `cfg.ransac_iterations` rounds. The best model (most
/// inliers, then lowest inlier SED sum) is re-fitted on its consensus set;
/// the re-fit is kept only if its own support is at least as large. The
/// score is the final inlier count.
pub fn ransac(set: &CorrespondenceSet, cfg: &EstimatorConfig) -> Result<EstimationResult> {
    cfg.validate()?;
    let pairs = set.pairs();
    if pairs.len() < SAMPLE_SIZE {
        return Err(EpiError::TooFewPoints {
            needed: SAMPLE_SIZE,
            got: pairs.len(),
        });
    }
    let threshold = cfg.ransac_inlier_threshold;
    let mut rng = Prng::new(cfg.ransac_seed);
    let mut best: Option<(FundamentalMatrix, Support, Vec<bool>)> = None;
    let mut sample = Vec::with_capacity(SAMPLE_SIZE);

    for _ in 0..cfg.ransac_iterations {
        sample.clear();
        sample.extend(
            rng.sample_indices(pairs.len(), SAMPLE_SIZE)
                .into_iter()
                .map(|i| pairs[i]),
        );
        let model = match solve_linear(&sample, None, cfg.hartley_normalization) {
            Ok(f) => f,
            Err(EpiError::DegenerateConfiguration) => continue,
            Err(e) => return Err(e),
        };
        let (s, mask) = support(&model, pairs, threshold);
        if best.as_ref().is_none_or(|(_, b, _)| s.beats(b)) {
            best = Some((model, s, mask));
        }
    }

    let (mut f, mut s, mut mask) = best.ok_or(EpiError::NoValidSample)?;
    let consensus: Vec<Correspondence> = pairs
        .iter()
        .zip(&mask)
        .filter(|(_, &m)| m)
        .map(|(p, _)| *p)
        .collect();
    if consensus.len() >= SAMPLE_SIZE {
        if let Ok(refit) = solve_linear(&consensus, None, cfg.hartley_normalization) {
            let (rs, rmask) = support(&refit, pairs, threshold);
            if rs.count >= s.count {
                (f, s, mask) = (refit, rs, rmask);
            }
        }
    }

    Ok(EstimationResult {
        f,
        inlier_mask: mask,
        score: s.count as f64,
        iterations_used: cfg.ransac_iterations,
    })
}
