//! Monte-Carlo MISE of the surface and eigen estimates. Pass the number of
//! runs as the first argument (default 10; tables are usually run with 100).

use ofpca::quadrature::uniform_grid;
use ofpca::sim::{mise_report, Design, MiseConfig, TruthSpec};

fn main() -> ofpca::Result<()> {
    let runs = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    for design in [Design::Distributions, Design::Networks] {
        let mut cfg = MiseConfig::new(design, vec![25, 50, 100]);
        cfg.runs = runs;
        let truth = TruthSpec::for_design(design, &uniform_grid(cfg.grid_size))?;
        println!("design {design}, {runs} runs");
        print!("{}", mise_report(&cfg, &truth)?.to_csv());
    }
    Ok(())
}
