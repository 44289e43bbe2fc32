use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataio::RatingMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Disjoint train/test partition of one rating matrix.
///
/// Both halves keep the source's full user and item index space.
#[derive(Debug, Clone)]
pub struct SplitPair<T = f64> {
    pub train: RatingMatrix<T>,
    pub test: RatingMatrix<T>,
    pub seed: u64,
    pub test_ratio: f64,
}

/// Assign each entry to the test side independently with probability
/// `test_ratio`. Entries are visited in canonical (user, item) order, so the
/// result depends only on the matrix, the ratio and the seed.
pub fn split<T: Scalar>(matrix: &RatingMatrix<T>, test_ratio: f64, seed: u64) -> Result<SplitPair<T>> {
    if !(0.0..=1.0).contains(&test_ratio) {
        return Err(Error::InvalidParameter(format!("test_ratio {test_ratio} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_rows = vec![Vec::new(); matrix.n_users()];
    let mut test_rows = vec![Vec::new(); matrix.n_users()];
    for (u, i, r) in matrix.entries() {
        // random::<f64>() lies in [0, 1): ratio 0 never selects, ratio 1 always does.
        if rng.random::<f64>() < test_ratio {
            test_rows[u].push((i, r));
        } else {
            train_rows[u].push((i, r));
        }
    }
    Ok(SplitPair { train: matrix.with_rows(train_rows), test: matrix.with_rows(test_rows), seed, test_ratio })
}
