use adaptive_holdout::mechanisms::{
    sparse_validate_ell, sparse_validate_failure_bound, SparseAnswer, SparseValidate,
    ValidationPredicate,
};
use adaptive_holdout::seed;
use clap::Args;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::util::sig6;
use crate::CliError;

#[derive(Debug, Args)]
pub struct SparseDemoArgs {
    /// Total query budget.
    #[arg(long, default_value_t = 8)]
    pub m: u64,
    /// Positive-answer budget.
    #[arg(long, default_value_t = 2)]
    pub budget: u64,
    /// Seeds the demo holdout set.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Per-query base failure probability for the bound table.
    #[arg(long = "beta-i", default_value_t = 0.01)]
    pub beta_i: f64,
    /// Builtin analyst: `search` (adaptive binary search on the holdout
    /// mean), `zeros`, or `ones`.
    #[arg(long, default_value = "search")]
    pub analyst: String,
}

pub fn run(args: &SparseDemoArgs) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(args.seed, "sparse-demo-data", 0));
    let holdout: Vec<f64> =
        (0..32).map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64).collect();

    let mut sv = SparseValidate::new(args.m, args.budget);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut bits = String::new();
    loop {
        let psi: ValidationPredicate<f64> = match args.analyst.as_str() {
            "zeros" => ValidationPredicate::constant(false),
            "ones" => ValidationPredicate::constant(true),
            "search" => {
                // adaptive analyst: each threshold depends on every answer so far
                let c = 0.5 * (lo + hi);
                ValidationPredicate::new(format!("mean>={c:.4}"), move |s: &[f64]| {
                    s.iter().sum::<f64>() / s.len() as f64 >= c
                })
            }
            other => {
                return Err(CliError::usage(format!(
                    "--analyst must be search, zeros, or ones, got {other}"
                )))
            }
        };
        match sv.answer(&psi, &holdout) {
            SparseAnswer::Bit(bit) => {
                bits.push(if bit { '1' } else { '0' });
                let c = 0.5 * (lo + hi);
                if bit {
                    lo = c;
                } else {
                    hi = c;
                }
            }
            SparseAnswer::Exhausted => break,
        }
    }
    println!("transcript: {bits}");
    println!(
        "queries answered: {}/{} | ones consumed: {}/{}",
        sv.queries_asked(),
        args.m,
        sv.ones_returned(),
        args.budget
    );
    if args.analyst == "search" {
        println!("holdout mean in [{}, {}]", sig6(lo), sig6(hi));
    }
    println!();
    println!("failure bounds at beta_i = {} (B = {}):", sig6(args.beta_i), args.budget);
    println!("  i   ell_i   ell_i*beta_i");
    for i in 1..=args.m {
        let ell = sparse_validate_ell(i, args.budget);
        let bound = sparse_validate_failure_bound(i, args.budget, args.beta_i)?;
        println!("  {i:<3} {ell:<7} {}", sig6(bound));
    }
    Ok(())
}
