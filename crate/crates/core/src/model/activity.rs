use rand::Rng;
use serde::Serialize;

use crate::real::Real;

/// Independent Bernoulli(`activity`) indicators for the `ues` UEs of one cell.
pub fn sample_activity<T: Real, R: Rng + ?Sized>(rng: &mut R, ues: usize, activity: T) -> Vec<bool> {
    let mut flags = vec![false; ues];
    fill_activity(rng, &mut flags, activity);
    flags
}

/// In-place variant of [`sample_activity`].
pub fn fill_activity<T: Real, R: Rng + ?Sized>(rng: &mut R, flags: &mut [bool], activity: T) {
    let a = activity.as_f64();
    for f in flags {
        *f = rng.random::<f64>() < a;
    }
}

/// Activity indicators `a_ji`, one set per cell.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ActivityPattern {
    pub flags: Vec<Vec<bool>>,
}

impl ActivityPattern {
    pub fn all_inactive(ues_per_cell: &[usize]) -> Self {
        Self {
            flags: ues_per_cell.iter().map(|&n| vec![false; n]).collect(),
        }
    }

    pub fn sample<T: Real, R: Rng + ?Sized>(rng: &mut R, ues_per_cell: &[usize], activity: T) -> Self {
        Self {
            flags: ues_per_cell
                .iter()
                .map(|&n| sample_activity(rng, n, activity))
                .collect(),
        }
    }

    pub fn resample<T: Real, R: Rng + ?Sized>(&mut self, rng: &mut R, activity: T) {
        for cell in &mut self.flags {
            fill_activity(rng, cell, activity);
        }
    }

    pub fn is_active(&self, cell: usize, ue: usize) -> bool {
        self.flags[cell][ue]
    }

    pub fn active_count(&self, cell: usize) -> usize {
        self.flags[cell].iter().filter(|&&a| a).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extreme_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_activity(&mut rng, 30, 0.0).iter().all(|&a| !a));
        assert!(sample_activity(&mut rng, 30, 1.0).iter().all(|&a| a));
    }

    #[test]
    fn active_count_is_binomial_mean() {
        // Binomial(30, 0.5): mean 15, sd of the mean over 1e5 draws ~ 0.0087
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 100_000;
        let total: usize = (0..draws)
            .map(|_| sample_activity(&mut rng, 30, 0.5).iter().filter(|&&a| a).count())
            .sum();
        let mean = total as f64 / draws as f64;
        assert!((14.9..=15.1).contains(&mean), "mean {mean}");
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = ActivityPattern::sample(&mut ChaCha8Rng::seed_from_u64(3), &[30, 30, 12], 0.3);
        let b = ActivityPattern::sample(&mut ChaCha8Rng::seed_from_u64(3), &[30, 30, 12], 0.3);
        assert_eq!(a, b);
        assert_eq!(a.flags[2].len(), 12);
    }
}
