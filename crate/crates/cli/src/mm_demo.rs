use std::fs;
use std::path::PathBuf;

use adaptive_holdout::mechanisms::StatisticalQuery;
use adaptive_holdout::median::MedianMechanism;
use adaptive_holdout::seed;
use clap::Args;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::util::sig6;
use crate::CliError;

#[derive(Debug, Args)]
pub struct MmDemoArgs {
    /// Number of distinct domain elements, spaced evenly over [0, 1].
    #[arg(long = "domain-size", default_value_t = 2)]
    pub domain_size: usize,
    /// Query budget.
    #[arg(long, default_value_t = 4)]
    pub m: u64,
    /// Target accuracy tau (alpha = tau/3).
    #[arg(long, default_value_t = 0.9)]
    pub tau: f64,
    /// `builtin` or a file with one query per line: domain-size
    /// whitespace-separated values in [0,1].
    #[arg(long, default_value = "builtin")]
    pub queries: String,
    /// Seeds the demo dataset.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

fn builtin_suite(domain: &[f64], m: u64) -> Vec<StatisticalQuery<f64>> {
    let mut suite: Vec<StatisticalQuery<f64>> = vec![
        StatisticalQuery::new("identity", |x: &f64| *x),
        StatisticalQuery::new("reversed", |x: &f64| 1.0 - *x),
        StatisticalQuery::constant(0.25),
        {
            let mid = domain[domain.len() / 2];
            StatisticalQuery::new("step", move |x: &f64| if *x >= mid { 1.0 } else { 0.0 })
        },
    ];
    suite.truncate(m as usize);
    suite
}

fn load_query_file(path: &PathBuf, domain_size: usize) -> Result<Vec<StatisticalQuery<f64>>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("reading {}: {e}", path.display())))?;
    let mut suite = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::usage(format!("line {}: {e}", lineno + 1)))?;
        if values.len() != domain_size {
            return Err(CliError::usage(format!(
                "line {}: expected {domain_size} values, got {}",
                lineno + 1,
                values.len()
            )));
        }
        suite.push(StatisticalQuery::new(format!("file:{}", lineno + 1), move |x: &f64| {
            // x is a grid point j/(size-1); recover the index
            let idx = (*x * (values.len() - 1) as f64).round() as usize;
            values[idx]
        }));
    }
    if suite.is_empty() {
        return Err(CliError::usage("query file holds no queries"));
    }
    Ok(suite)
}

pub fn run(args: &MmDemoArgs) -> Result<(), CliError> {
    if args.domain_size < 2 {
        return Err(CliError::usage("--domain-size must be >= 2"));
    }
    let domain: Vec<f64> =
        (0..args.domain_size).map(|j| j as f64 / (args.domain_size - 1) as f64).collect();
    let mut mm = MedianMechanism::new(domain.clone(), args.m, args.tau)?;

    // demo dataset: 50 elements drawn uniformly from the domain grid
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(args.seed, "mm-demo-data", 0));
    let dataset: Vec<f64> =
        (0..50).map(|_| domain[(rng.next_u64() % args.domain_size as u64) as usize]).collect();

    let suite = if args.queries == "builtin" {
        builtin_suite(&domain, args.m)
    } else {
        load_query_file(&PathBuf::from(&args.queries), args.domain_size)?
    };

    println!(
        "domain size {} | m={} tau={} alpha={} t={} | candidate multisets: {}",
        args.domain_size,
        args.m,
        sig6(args.tau),
        sig6(mm.alpha()),
        mm.candidate_size(),
        mm.consistent_len(),
    );
    for q in suite.iter().take(args.m as usize) {
        let entry = mm.answer_entry(q, &dataset)?;
        println!(
            "query {:<10} a_pub={} a_priv={} answer={} hard={}",
            entry.label,
            sig6(entry.a_pub),
            sig6(entry.a_priv),
            sig6(entry.answer),
            if entry.hard { "yes" } else { "no" },
        );
    }
    let bound = mm.hard_query_bound();
    println!(
        "hard queries: {} (bound {})",
        mm.hard_records().len(),
        sig6(bound),
    );
    Ok(())
}
