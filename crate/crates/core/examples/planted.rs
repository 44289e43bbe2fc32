//! Train on ratings generated from hidden positive factors and check how
//! often the learned model orders held-out pairs the same way.
//!
//!     cargo run --release --example planted -- [GAMMA] [ITERS]

use pareto_rank::dataio::{split, RatingMatrix};
use pareto_rank::model::{init_model, FactorModel};
use pareto_rank::ppr::{pairwise_concordance, train_ppr, TrainConfig};

fn main() -> pareto_rank::Result<()> {
    let mut args = std::env::args().skip(1);
    let gamma: f64 = args.next().map_or(0.1, |s| s.parse().expect("GAMMA must be a number"));
    let max_iters: usize = args.next().map_or(100, |s| s.parse().expect("ITERS must be an integer"));

    let (n, m, d) = (200, 100, 8);
    let truth: FactorModel = init_model(n, m, d, 2024)?;
    let mut scores = Vec::with_capacity(n * m);
    for u in 0..n {
        for i in 0..m {
            scores.push((u, i, truth.score(u, i)?));
        }
    }
    let lo = scores.iter().map(|s| s.2).fold(f64::INFINITY, f64::min);
    let hi = scores.iter().map(|s| s.2).fold(f64::NEG_INFINITY, f64::max);
    // Five equal-width rating levels.
    let ratings = scores.iter().map(|&(u, i, s)| (u, i, (1.0 + ((s - lo) / (hi - lo) * 5.0).floor()).min(5.0)));
    let matrix = RatingMatrix::from_triplets(n, m, ratings, None)?;
    let data = split(&matrix, 0.2, 3)?;

    let cfg = TrainConfig { gamma, max_iters, d, seed: 5, ..TrainConfig::default() };
    let (model, stats) = train_ppr(&data.train, &cfg)?;
    let untrained: FactorModel = init_model(n, m, d, cfg.seed)?;
    println!("ratings            {}", matrix.nnz());
    println!("concordance before {:.4}", pairwise_concordance(&untrained, &data.test)?);
    println!("concordance after  {:.4}", pairwise_concordance(&model, &data.test)?);
    println!("hidden factors     {:.4}", pairwise_concordance(&truth, &data.test)?);
    println!("updates {} skips {} clipped {}", stats.total_updates(), stats.total_skips(), stats.total_clips());
    Ok(())
}
