//! Accuracy and fairness metrics: MAE, the Degree of Matthew Effect, the
//! rating-difference power-law diagnostic, and cross-algorithm comparison.
//!
//! The Degree of Matthew Effect (DME) is the OLS slope of
//! `ln(recommendation count)` against `ln(popularity rank)` over items that
//! appear in at least one top-K list. A slope near zero means exposure is
//! spread evenly; a steep negative slope means a few items take most of it.
//! Comparisons use `|slope|`, smaller is fairer.

use std::cmp::Ordering;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dataio::RatingMatrix;
use crate::error::{Error, Result};
use crate::model::RecommendationSet;
use crate::scalar::Scalar;

/// Mean absolute error between per-entry predictions and `test`, with
/// predictions aligned to `test.entries()` order.
pub fn mae<T: Scalar>(predictions: &[T], test: &RatingMatrix<T>) -> Result<T> {
    if test.is_empty() {
        return Err(Error::Empty("test set has no ratings"));
    }
    if predictions.len() != test.nnz() {
        return Err(Error::InvalidParameter(format!(
            "{} predictions for {} test entries",
            predictions.len(),
            test.nnz()
        )));
    }
    let total: T = predictions.iter().zip(test.entries()).map(|(&p, (_, _, r))| (p - r).abs()).sum();
    Ok(total / T::of(test.nnz() as f64))
}

/// Ordinary least squares slope and intercept of `y` on `x`.
/// `None` when there are fewer than two distinct `x` values.
pub fn ols<T: Scalar>(points: &[(T, T)]) -> Option<(T, T)> {
    if points.len() < 2 {
        return None;
    }
    let n = T::of(points.len() as f64);
    let mean_x = points.iter().map(|p| p.0).sum::<T>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<T>() / n;
    let sxx: T = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: T = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, mean_y - slope * mean_x))
}

/// Power-law fit of recommendation frequency against popularity rank.
#[derive(Debug, Clone, PartialEq)]
pub struct DmeFit<T = f64> {
    pub slope: T,
    pub intercept: T,
    /// `(rank, count)` for every item with a positive count, rank 1 first.
    pub points: Vec<(usize, usize)>,
}

impl<T: Scalar> DmeFit<T> {
    pub fn fit_points(&self) -> usize {
        self.points.len()
    }
}

/// DME from raw per-item counts. Zero counts are dropped; the rest are
/// ranked by descending count with the lower item index first on ties.
pub fn dme_from_counts<T: Scalar>(counts: &[usize]) -> Result<DmeFit<T>> {
    let mut present: Vec<(usize, usize)> =
        counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i, c)).collect();
    if present.len() < 2 {
        return Err(Error::Degenerate(format!(
            "{} distinct recommended items; the log-log slope needs at least 2",
            present.len()
        )));
    }
    present.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let points: Vec<(usize, usize)> = present.iter().enumerate().map(|(r, &(_, c))| (r + 1, c)).collect();
    let logs: Vec<(T, T)> = points.iter().map(|&(r, c)| (T::of(r as f64).ln(), T::of(c as f64).ln())).collect();
    let (slope, intercept) = ols(&logs).expect("ranks are distinct");
    Ok(DmeFit { slope, intercept, points })
}

/// Degree of Matthew Effect of a set of top-K lists.
pub fn degree_of_matthew_effect<T: Scalar>(recs: &RecommendationSet<T>, n_items: usize) -> Result<DmeFit<T>> {
    dme_from_counts(&recs.item_frequencies(n_items)?)
}

/// Counts of positive within-user rating differences, with a log-log fit.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffHistogram<T = f64> {
    /// `(difference, count)`, ascending by difference.
    pub bins: Vec<(T, u64)>,
    /// Slope of `ln(count)` on `ln(difference)`; `None` with one bin.
    pub slope: Option<T>,
}

impl<T: Scalar> DiffHistogram<T> {
    pub fn total_pairs(&self) -> u64 {
        self.bins.iter().map(|b| b.1).sum()
    }

    pub fn count(&self, difference: T) -> u64 {
        self.bins.iter().find(|b| b.0 == difference).map(|b| b.1).unwrap_or(0)
    }
}

/// Histogram of `|R[u][a] − R[u][b]| > 0` over every user and every
/// unordered pair of that user's rated items.
pub fn rating_diff_histogram<T: Scalar>(matrix: &RatingMatrix<T>) -> Result<DiffHistogram<T>> {
    let mut diffs: Vec<(T, u64)> = Vec::new();
    let mut levels: Vec<(T, u64)> = Vec::new();
    for user in 0..matrix.n_users() {
        // Group the user's ratings by value, then combine the groups pairwise.
        let mut values: Vec<T> = matrix.user_ratings(user).iter().map(|e| e.1).collect();
        if values.len() < 2 {
            continue;
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        levels.clear();
        for v in values {
            match levels.last_mut() {
                Some(last) if last.0 == v => last.1 += 1,
                _ => levels.push((v, 1)),
            }
        }
        for (hi_pos, &(hi, hi_n)) in levels.iter().enumerate() {
            for &(lo, lo_n) in &levels[..hi_pos] {
                diffs.push((hi - lo, hi_n * lo_n));
            }
        }
    }
    diffs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut bins: Vec<(T, u64)> = Vec::new();
    for (d, n) in diffs {
        match bins.last_mut() {
            Some(last) if last.0 == d => last.1 += n,
            _ => bins.push((d, n)),
        }
    }
    if bins.is_empty() {
        return Err(Error::Degenerate("no positive rating differences".into()));
    }
    let logs: Vec<(T, T)> = bins.iter().map(|&(d, n)| (d.ln(), T::of(n as f64).ln())).collect();
    let slope = ols(&logs).map(|fit| fit.0);
    Ok(DiffHistogram { bins, slope })
}

/// Write `(x, count, ln_x, ln_count)` rows for plotting. `x_name` labels
/// the first column (`value` for differences, `rank` for DME points).
pub fn write_plot_csv<W: Write>(out: W, x_name: &str, points: &[(f64, u64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([x_name, "count", &format!("ln_{x_name}"), "ln_count"])?;
    for &(x, n) in points {
        w.write_record([x.to_string(), n.to_string(), x.ln().to_string(), (n as f64).ln().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Evaluation summary of one algorithm on one dataset split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub algorithm: String,
    pub dataset: String,
    pub seed: u64,
    pub test_ratio: f64,
    pub k: usize,
    pub mae: f64,
    pub dme_slope: Option<f64>,
    pub dme_abs: Option<f64>,
    /// Items with a positive recommendation count.
    pub fit_points: usize,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub algorithm: String,
    pub mae: f64,
    pub mae_rank: usize,
    pub dme_slope: Option<f64>,
    pub dme_abs: Option<f64>,
    pub fairness_rank: usize,
}

/// Both ranking tables, one row per report in input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    /// Algorithms by ascending MAE.
    pub fn mae_order(&self) -> Vec<&str> {
        self.order_by(|r| r.mae_rank)
    }

    /// Algorithms by ascending `|DME|`, fairest first.
    pub fn fairness_order(&self) -> Vec<&str> {
        self.order_by(|r| r.fairness_rank)
    }

    fn order_by(&self, key: impl Fn(&ComparisonRow) -> usize) -> Vec<&str> {
        let mut rows: Vec<&ComparisonRow> = self.rows.iter().collect();
        rows.sort_by_key(|r| key(r));
        rows.into_iter().map(|r| r.algorithm.as_str()).collect()
    }

    /// `algorithm,mae,mae_rank,dme_slope,dme_abs,fairness_rank`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["algorithm", "mae", "mae_rank", "dme_slope", "dme_abs", "fairness_rank"])?;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.algorithm.clone(),
                r.mae.to_string(),
                r.mae_rank.to_string(),
                opt(r.dme_slope),
                opt(r.dme_abs),
                r.fairness_rank.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// 1-based ranks under `cmp`, ties broken by algorithm name.
fn ranks_by(reports: &[MetricsReport], cmp: impl Fn(&MetricsReport, &MetricsReport) -> Ordering) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..reports.len()).collect();
    idx.sort_by(|&a, &b| cmp(&reports[a], &reports[b]).then_with(|| reports[a].algorithm.cmp(&reports[b].algorithm)));
    let mut ranks = vec![0; reports.len()];
    for (pos, &i) in idx.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    ranks
}

/// Rank reports by MAE and by `|DME|`. Reports without a DME rank last.
pub fn compare(reports: &[MetricsReport]) -> Result<Comparison> {
    if reports.len() < 2 {
        return Err(Error::InvalidParameter("comparison needs at least two reports".into()));
    }
    let first = &reports[0];
    for r in &reports[1..] {
        if r.dataset != first.dataset || r.seed != first.seed || r.test_ratio != first.test_ratio || r.k != first.k {
            return Err(Error::Config(format!(
                "report {:?} was produced on {}/seed {}/ratio {}/k {}, expected {}/seed {}/ratio {}/k {}",
                r.algorithm, r.dataset, r.seed, r.test_ratio, r.k, first.dataset, first.seed, first.test_ratio, first.k
            )));
        }
    }
    let mae_ranks = ranks_by(reports, |a, b| a.mae.partial_cmp(&b.mae).unwrap_or(Ordering::Equal));
    let fair_ranks = ranks_by(reports, |a, b| match (a.dme_abs, b.dme_abs) {
        (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(Ordering::Equal),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    });
    let rows = reports
        .iter()
        .enumerate()
        .map(|(n, r)| ComparisonRow {
            algorithm: r.algorithm.clone(),
            mae: r.mae,
            mae_rank: mae_ranks[n],
            dme_slope: r.dme_slope,
            dme_abs: r.dme_abs,
            fairness_rank: fair_ranks[n],
        })
        .collect();
    Ok(Comparison { rows })
}
