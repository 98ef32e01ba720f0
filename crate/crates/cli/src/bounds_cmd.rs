use adaptive_holdout::bounds::{
    bad_event_bound, dp_compose_advanced, dp_compose_basic, dp_generalization_bound,
    maxinfo_compose, maxinfo_from_dl, maxinfo_from_dp_iid, maxinfo_from_dp_pure, mcdiarmid_bound,
    ConcentrationParams, MaxInfoBound, PrivacyParams,
};
use clap::Subcommand;

use crate::util::sig6;
use crate::CliError;

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Sum privacy parameters of adaptively composed mechanisms.
    DpComposeBasic {
        /// Per-mechanism epsilon; repeatable, paired with --delta by position.
        #[arg(long = "eps", required = true)]
        eps: Vec<f64>,
        /// Per-mechanism delta; defaults to 0 for any missing position.
        #[arg(long = "delta")]
        delta: Vec<f64>,
    },
    /// Advanced composition of m copies of an (eps, delta) mechanism.
    DpComposeAdvanced {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long)]
        m: u64,
        #[arg(long = "delta-prime")]
        delta_prime: f64,
    },
    /// Max-information of a pure eps-DP algorithm on n samples.
    MiFromDp {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: u64,
    },
    /// The stronger i.i.d. max-information bound.
    MiFromDpIid {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        beta: f64,
    },
    /// Max-information from an output range of a given size.
    MiFromDl {
        #[arg(long)]
        range: u64,
        #[arg(long)]
        beta: f64,
    },
    /// Compose (k, beta) max-information bounds.
    MiCompose {
        #[arg(long = "k", required = true)]
        k: Vec<f64>,
        #[arg(long = "beta", required = true)]
        beta: Vec<f64>,
    },
    /// Probability that a bad event survives a (k, beta) bound.
    BadEvent {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        p: f64,
    },
    /// McDiarmid tail for a c-sensitive function of n samples.
    Mcdiarmid {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        alpha: f64,
    },
    /// DP level and failure probability preserving concentration.
    DpGen {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        tau: f64,
    },
}

pub fn run(cmd: &BoundsCommand) -> Result<(), CliError> {
    match cmd {
        BoundsCommand::DpComposeBasic { eps, delta } => {
            let parts: Vec<PrivacyParams> = eps
                .iter()
                .enumerate()
                .map(|(i, &e)| PrivacyParams::new(e, delta.get(i).copied().unwrap_or(0.0)))
                .collect::<Result<_, _>>()?;
            let out = dp_compose_basic(&parts)?;
            println!("inputs: {} mechanisms", parts.len());
            println!("epsilon = {}", sig6(out.epsilon));
            println!("delta   = {}", sig6(out.delta));
        }
        BoundsCommand::DpComposeAdvanced { eps, delta, m, delta_prime } => {
            let out = dp_compose_advanced(*eps, *delta, *m, *delta_prime)?;
            println!("inputs: eps={} delta={} m={} delta'={}", sig6(*eps), sig6(*delta), m, sig6(*delta_prime));
            println!("epsilon = {}", sig6(out.epsilon));
            println!("delta   = {}", sig6(out.delta));
        }
        BoundsCommand::MiFromDp { eps, n } => {
            let out = maxinfo_from_dp_pure(*eps, *n)?;
            println!("inputs: eps={} n={n}", sig6(*eps));
            println!("k_bits = {}", sig6(out.k_bits));
            println!("beta   = {}", sig6(out.beta));
        }
        BoundsCommand::MiFromDpIid { eps, n, beta } => {
            let out = maxinfo_from_dp_iid(*eps, *n, *beta)?;
            println!("inputs: eps={} n={n} beta={}", sig6(*eps), sig6(*beta));
            println!("k_bits = {}", sig6(out.k_bits));
            println!("beta   = {}", sig6(out.beta));
        }
        BoundsCommand::MiFromDl { range, beta } => {
            let out = maxinfo_from_dl(*range, *beta)?;
            println!("inputs: range={range} beta={}", sig6(*beta));
            println!("k_bits = {}", sig6(out.k_bits));
            println!("beta   = {}", sig6(out.beta));
        }
        BoundsCommand::MiCompose { k, beta } => {
            if k.len() != beta.len() {
                return Err(CliError::usage("--k and --beta must repeat in pairs"));
            }
            let parts: Vec<MaxInfoBound> = k
                .iter()
                .zip(beta)
                .map(|(&k_bits, &beta)| MaxInfoBound { k_bits, beta })
                .collect();
            let out = maxinfo_compose(&parts)?;
            println!("inputs: {} bounds", parts.len());
            println!("k_bits = {}", sig6(out.k_bits));
            println!("beta   = {}", sig6(out.beta));
        }
        BoundsCommand::BadEvent { k, beta, p } => {
            let out = bad_event_bound(MaxInfoBound { k_bits: *k, beta: *beta }, *p)?;
            println!("inputs: k={} beta={} p={}", sig6(*k), sig6(*beta), sig6(*p));
            println!("bound = {}", sig6(out));
        }
        BoundsCommand::Mcdiarmid { c, n, alpha } => {
            let out = mcdiarmid_bound(ConcentrationParams::new(*c, *n, *alpha)?);
            println!("inputs: c={} n={n} alpha={}", sig6(*c), sig6(*alpha));
            println!("tail = {}", sig6(out));
        }
        BoundsCommand::DpGen { c, n, tau } => {
            let (eps, fail) = dp_generalization_bound(ConcentrationParams::new(*c, *n, *tau)?);
            println!("inputs: c={} n={n} tau={}", sig6(*c), sig6(*tau));
            println!("required_eps = {}", sig6(eps));
            println!("failure_prob = {}", sig6(fail));
        }
    }
    Ok(())
}
