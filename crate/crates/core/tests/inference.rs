use proptest::prelude::*;
use socnet::generators::{gen_pah, gen_patch};
use socnet::inference::{
    bayes_factor, fit_model, lrt, mixing_counts, replay_probabilities, select_model, Candidate,
    Criterion,
};
use socnet::{generate, GenParams, MixingMatrix, Model};

fn sym(h: f64) -> MixingMatrix {
    MixingMatrix::symmetric(h).unwrap()
}

#[test]
fn criteria_follow_their_formulas() {
    let (g, trace) = gen_patch(400, 2, 0.3, sym(0.7), 0.5, 2).unwrap();
    for model in Model::UNDIRECTED {
        let r = fit_model(&trace, g.labels(), model).unwrap();
        assert!(r.log_lik <= 0.0);
        assert!((r.aic - (2.0 * r.k as f64 - 2.0 * r.log_lik)).abs() < 1e-9);
        let bic = r.k as f64 * (r.n_events as f64).ln() - 2.0 * r.log_lik;
        assert!((r.bic - bic).abs() < 1e-9);
    }
}

#[test]
fn unlabelled_signal_gives_neutral_estimate() {
    let params = GenParams::pa(5000, 2, 4).with_f_m(0.5);
    let (g, trace) = generate(&params).unwrap();
    let h = fit_model(&trace, g.labels(), Model::Pah)
        .unwrap()
        .h_hat
        .unwrap();
    assert!((0.45..=0.55).contains(&h), "{h}");
}

#[test]
fn single_candidate_has_no_comparisons() {
    let (g, trace) = gen_pah(300, 2, 0.2, sym(0.8), 1).unwrap();
    let t = select_model(&trace, g.labels(), &[Model::Pa], Criterion::Bic).unwrap();
    assert_eq!(t.reports.len(), 1);
    assert!(t.comparisons.is_empty());
    assert!(select_model(&trace, g.labels(), &[Model::Pa, Model::Dpa], Criterion::Bic).is_err());
}

#[test]
fn self_comparison_and_lrt_edge_cases() {
    let (g, trace) = gen_pah(300, 2, 0.2, sym(0.8), 1).unwrap();
    assert_eq!(
        bayes_factor(&trace, g.labels(), Model::Pah, Model::Pah).unwrap(),
        0.0
    );
    let pah = fit_model(&trace, g.labels(), Model::Pah).unwrap();
    let same = lrt(&pah, &pah);
    assert!(same.is_err(), "a model is not nested in itself");
    let pa = fit_model(&trace, g.labels(), Model::Pa).unwrap();
    let r = lrt(&pa, &pah).unwrap();
    assert_eq!(r.df, 1);
    assert!(r.statistic >= 0.0 && (0.0..=1.0).contains(&r.p_value));
}

#[test]
fn mixing_estimate_tracks_generation() {
    let (g, _) = gen_pah(3000, 2, 0.5, sym(0.9), 3).unwrap();
    let est = mixing_counts(&g).homophily_estimate().unwrap();
    assert!(est > 0.8, "{est}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn nested_fits_are_monotone(
        n in 10usize..150,
        h in 0.0f64..=1.0,
        p_tc in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let (g, trace) = gen_patch(n, 2, 0.3, sym(h), p_tc, seed).unwrap();
        let ll = |m| fit_model(&trace, g.labels(), m).unwrap().log_lik;
        let (pa, pah, patch) = (ll(Model::Pa), ll(Model::Pah), ll(Model::Patch));
        prop_assert!(pah >= pa - 1e-9);
        prop_assert!(patch >= pah - 1e-9);
    }

    #[test]
    fn event_vectors_are_normalized(
        n in 4usize..80,
        h in 0.0f64..=1.0,
        p_tc in 0.0f64..=1.0,
        score_h in 0.0f64..=1.0,
        score_p in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let (g, trace) = gen_patch(n, 2, 0.3, sym(h), p_tc, seed).unwrap();
        let c = Candidate::new(Model::Patch, score_h, score_p);
        for ev in replay_probabilities(&trace, g.labels(), &c).unwrap() {
            if ev.degenerate {
                continue;
            }
            let s: f64 = ev.probs.iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-9, "{}", s);
        }
    }
}
