//! Calculator regression against the frozen high-precision oracle values
//! in `tests/data/derived_oracle.json` (regenerated by
//! `tools/derived_oracle.py`), asserted to 4 significant digits.

use adaptive_holdout::bounds::{
    dp_compose_advanced, dp_generalization_bound, maxinfo_exact, maxinfo_from_dl,
    maxinfo_from_dp_iid, maxinfo_from_dp_pure, maxinfo_from_rdl, mcdiarmid_bound,
    ConcentrationParams, DiscreteJoint,
};
use adaptive_holdout::dl_sampler::{fallback_probability, rdl_of_transcript, trial_count};
use adaptive_holdout::mechanisms::{sparse_validate_ell, thresholdout_params};
use adaptive_holdout::median::mm_sample_bound;

use num_traits::ToPrimitive;
use serde_json::Value;

fn oracle() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/derived_oracle.json");
    let text = std::fs::read_to_string(path).expect("frozen oracle file");
    serde_json::from_str(&text).expect("oracle JSON")
}

fn expect_f(v: &Value, key: &str) -> f64 {
    v.get(key).and_then(Value::as_f64).unwrap_or_else(|| panic!("missing oracle key {key}"))
}

/// Agreement to 4 significant digits.
fn assert_sig4(actual: f64, expected: f64, what: &str) {
    let ok = if expected == 0.0 {
        actual.abs() < 1e-12
    } else {
        ((actual - expected) / expected).abs() <= 5e-4
    };
    assert!(ok, "{what}: got {actual}, oracle says {expected}");
}

pub fn run_calculator_regression() {
    let o = oracle();

    // Thresholdout parameter calculator
    let p = thresholdout_params(0.24, 0.1, 100, 10).expect("params");
    assert_sig4(p.threshold, expect_f(&o, "tho_params_T"), "T = 3 tau / 4");
    assert_sig4(p.sigma, expect_f(&o, "tho_params_sigma"), "sigma = tau / (96 ln(4m/beta))");

    // branch selection of the holdout-size bound
    let small = thresholdout_params(0.24, 0.1, 100_000, 1).expect("params");
    assert_sig4(small.n0, expect_f(&o, "tho_n0_B1"), "n0 at B=1");
    assert_sig4(small.n1, expect_f(&o, "tho_n1_B1"), "n1 at B=1");
    assert_sig4(small.n_min as f64, expect_f(&o, "tho_nmin_B1"), "n_min at B=1");
    let large = thresholdout_params(0.24, 0.1, 100_000, 100_000).expect("params");
    assert_sig4(large.n0, expect_f(&o, "tho_n0_B1e5"), "n0 at B=1e5");
    assert_sig4(large.n1, expect_f(&o, "tho_n1_B1e5"), "n1 at B=1e5");
    assert_sig4(large.n_min as f64, expect_f(&o, "tho_nmin_B1e5"), "n_min at B=1e5");

    // advanced composition
    let comp = dp_compose_advanced(0.1, 0.0, 100, 1e-6).expect("compose");
    assert_sig4(comp.epsilon, expect_f(&o, "adv_comp_eps"), "advanced composition epsilon");
    assert_sig4(comp.delta, expect_f(&o, "adv_comp_delta"), "advanced composition delta");

    // max-information bounds
    assert_sig4(
        maxinfo_from_dp_pure(2f64.ln(), 10).expect("mi").k_bits,
        expect_f(&o, "mi_dp_ln2_n10"),
        "mi from pure DP at eps=ln 2",
    );
    assert_sig4(
        maxinfo_from_dp_pure(0.1, 100).expect("mi").k_bits,
        expect_f(&o, "mi_dp_e01_n100"),
        "mi from pure DP at eps=0.1",
    );
    assert_sig4(
        maxinfo_from_dp_iid(0.1, 100, 0.01).expect("mi").k_bits,
        expect_f(&o, "mi_dp_iid"),
        "iid mi bound",
    );
    // beta = 2 e^{-tau^2 n} turns the iid bound into factor * log2(e) tau^2 n
    let tau = 0.1;
    let n = 1000u64;
    let t2n = tau * tau * n as f64;
    let k = maxinfo_from_dp_iid(tau, n, 2.0 * (-t2n).exp()).expect("mi").k_bits;
    assert_sig4(
        k / (std::f64::consts::LOG2_E * t2n),
        expect_f(&o, "mi_dp_iid_factor"),
        "iid bound inflation factor",
    );
    assert_sig4(
        maxinfo_from_dl(1024, 2f64.powi(-10)).expect("mi").k_bits,
        expect_f(&o, "mi_dl_1024"),
        "mi from description length 1024",
    );
    assert_sig4(
        maxinfo_from_dl(2, 0.5).expect("mi").k_bits,
        expect_f(&o, "mi_dl_2_half"),
        "mi from description length 2",
    );
    assert_sig4(
        maxinfo_from_rdl(10.0, 0.01).expect("mi").k_bits,
        expect_f(&o, "mi_rdl_k10"),
        "mi from randomized description length k=10",
    );
    assert_sig4(
        maxinfo_from_rdl(5.0, 0.125).expect("mi").k_bits,
        expect_f(&o, "mi_rdl_k5"),
        "mi from randomized description length k=5",
    );

    // SparseValidate failure-bound prefix counts
    let ells: Vec<u64> = o["ell_table_B2"]
        .as_array()
        .expect("ell table")
        .iter()
        .map(|v| v.as_u64().expect("int"))
        .collect();
    for (i, &expected) in ells.iter().enumerate() {
        let got = sparse_validate_ell(i as u64 + 1, 2).to_u64().expect("fits");
        assert_eq!(got, expected, "ell_{} at B=2", i + 1);
    }

    // concentration bounds
    assert_sig4(
        mcdiarmid_bound(ConcentrationParams::new(1.0, 100, 10.0).expect("cp")),
        expect_f(&o, "mcdiarmid_c1_n100_a10"),
        "mcdiarmid tail",
    );
    let (eps, fail) =
        dp_generalization_bound(ConcentrationParams::new(1.0 / 400.0, 400, 0.1).expect("cp"));
    assert_sig4(eps, expect_f(&o, "dp_gen_eps"), "dp generalization epsilon");
    assert_sig4(fail, expect_f(&o, "dp_gen_fail"), "dp generalization failure");

    // rejection sampler accounting at k=1, beta'=0.1
    let t = trial_count(1.0, 0.1).expect("t");
    assert_eq!(t, o["rej_trials_k1"].as_u64().expect("int"), "trial count");
    assert_sig4(
        fallback_probability(1.0, 0.1).expect("fb"),
        expect_f(&o, "rej_fallback_k1"),
        "fallback probability",
    );
    assert_sig4(
        (-(t as f64) / 2.0).exp(),
        expect_f(&o, "rej_waitbound_k1"),
        "wait bound e^{-t/2^k}",
    );
    assert_sig4(
        rdl_of_transcript(3.0, (-8.0f64).exp()).expect("rdl"),
        expect_f(&o, "rdl_k3_em8"),
        "transcript description length",
    );
    assert_sig4(
        rdl_of_transcript(10.0, 0.01).expect("rdl"),
        expect_f(&o, "rdl_transcript_k10"),
        "transcript description length k=10",
    );

    // Median Mechanism sample bound and sizing
    assert_eq!(
        mm_sample_bound(2, 2, 0.9, 0.1).expect("bound"),
        o["mm_bound"].as_u64().expect("int"),
        "mm sample bound"
    );
    let mm = adaptive_holdout::median::MedianMechanism::new(vec![0.0, 1.0], 2, 0.9).expect("mm");
    assert_eq!(mm.candidate_size(), o["mm_t"].as_u64().expect("int"), "mm candidate size");
    assert_eq!(
        mm.consistent_len() as u64,
        o["mm_multisets"].as_u64().expect("int"),
        "mm multiset count"
    );

    // exact max-information of pinned joints
    let sym = DiscreteJoint::from_matrix(vec![vec![0.4, 0.1], vec![0.1, 0.4]]).expect("joint");
    assert_sig4(
        maxinfo_exact(&sym, 0.0).expect("mi").bits().expect("finite"),
        expect_f(&o, "mi_exact_2x2_b0"),
        "exact mi of the symmetric 2x2 joint",
    );
    assert_sig4(
        maxinfo_exact(&sym, 0.1).expect("mi").bits().expect("finite"),
        expect_f(&o, "mi_exact_2x2_b01"),
        "exact mi at beta=0.1",
    );
    let ident = DiscreteJoint::from_matrix(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).expect("joint");
    assert_sig4(
        maxinfo_exact(&ident, 0.0).expect("mi").bits().expect("finite"),
        expect_f(&o, "mi_exact_ident_b0"),
        "exact mi of an identity copy",
    );

    // Laplace tail constant used by the noise tests
    assert_sig4((-3.0f64).exp(), expect_f(&o, "lap_tail_3"), "laplace tail e^{-3}");
}
