use freeprod_core::conjugacy::find_conjugator;
use freeprod_core::diagram::{validate_diagram, LabeledDiagram};
use freeprod_core::factorization::{
    mixed_genus_lower_bound, mixed_genus_search, quasiperiodicity_search, MixedFactorization,
    SearchOptions,
};
use freeprod_core::mu::{embed_mu_in, MuContext};
use freeprod_core::random::random_word;
use freeprod_core::surgery::{lemma1_pipeline, random_seed_input, SeedInput};
use freeprod_core::{Context, Ctx, Execution, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SPECS: [&str; 5] = ["Z,Z", "Z2,Z3", "Z3,Z", "Z,Z,Z4", "Z5,Z5"];

fn words(seed: u64, spec: usize, count: usize, max_len: usize) -> (Ctx, Vec<Word>) {
    let ctx = Context::parse(SPECS[spec % SPECS.len()]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ws = (0..count)
        .map(|_| random_word(&ctx, &mut rng, max_len))
        .collect();
    (ctx, ws)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_laws(seed: u64, spec in 0usize..5) {
        let (ctx, ws) = words(seed, spec, 3, 8);
        let (u, v, w) = (&ws[0], &ws[1], &ws[2]);
        let uv_w = u.multiply(v).unwrap().multiply(w).unwrap();
        let u_vw = u.multiply(&v.multiply(w).unwrap()).unwrap();
        prop_assert_eq!(uv_w, u_vw);
        prop_assert!(u.multiply(&u.inverse()).unwrap().is_empty());
        prop_assert_eq!(u.multiply(&Word::identity(&ctx)).unwrap(), u.clone());
        prop_assert_eq!(&Word::parse(&ctx, &u.to_string()).unwrap(), u);
    }

    #[test]
    fn cyclic_reduction_splits_the_word(seed: u64, spec in 0usize..5) {
        let (_, ws) = words(seed, spec, 1, 10);
        let w = &ws[0];
        let c = w.cyclic_reduce();
        let rebuilt = c.conjugator.multiply(&c.core).unwrap().multiply(&c.conjugator.inverse()).unwrap();
        prop_assert_eq!(&rebuilt, w);
        prop_assert!(c.core.len() <= 1 || c.core.is_cyclically_reduced());
    }

    #[test]
    fn conjugates_are_recognized(seed: u64, spec in 0usize..5) {
        let (_, ws) = words(seed, spec, 2, 7);
        let (u, s) = (&ws[0], &ws[1]);
        let v = s.multiply(u).unwrap().multiply(&s.inverse()).unwrap();
        let g = find_conjugator(u, &v).expect("conjugate");
        prop_assert_eq!(&g.multiply(u).unwrap().multiply(&g.inverse()).unwrap(), &v);
        prop_assert!(u.is_conjugate(&v).unwrap());
    }

    #[test]
    fn embedding_is_a_homomorphism(seed: u64, spec in 0usize..5) {
        let (ctx, ws) = words(seed, spec, 2, 8);
        let m = MuContext::new(&ctx);
        let (u, v) = (&ws[0], &ws[1]);
        let lhs = embed_mu_in(&m, &u.multiply(v).unwrap());
        let rhs = embed_mu_in(&m, u).multiply(&embed_mu_in(&m, v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_factorizations_round_trip(seed: u64, spec in 0usize..5) {
        let (ctx, ws) = words(seed, spec, 4, 4);
        let d = ws[3].letters().first().copied();
        let letters = d.map(|d| vec![(ws[2].clone(), d)]).unwrap_or_default();
        let f = MixedFactorization::new(&ctx, vec![(ws[0].clone(), ws[1].clone())], letters).unwrap();
        let back = MixedFactorization::from_repr(&f.to_repr()).unwrap();
        prop_assert_eq!(back.evaluate().unwrap(), f.evaluate().unwrap());
        prop_assert!(mixed_genus_lower_bound(&f.evaluate().unwrap()) <= f.score());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn surgery_output_is_a_valid_diagram(seed: u64, spec in 0usize..5) {
        let ctx = Context::parse(["Z,Z", "Z2,Z3", "Z3,Z3", "Z,Z5", "Z4,Z"][spec]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = random_seed_input(&ctx, &mut rng, 2, 2, 2, 3);
        let out = lemma1_pipeline(&input).unwrap();
        prop_assert!(validate_diagram(&out.diagram).is_empty());
        prop_assert!(out.extended_genus <= input.genus_bound());
        let back = LabeledDiagram::from_json(&out.diagram.to_json()).unwrap();
        prop_assert_eq!(back.extended_genus().unwrap(), out.extended_genus);
        let back = SeedInput::from_json(&input.to_json()).unwrap();
        prop_assert_eq!(back.product(), input.product());
    }
}

/// The lower bound never exceeds the score of a witness the search finds,
/// nor the genus bound of a seed input.
#[test]
fn lower_bound_is_below_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for spec in ["Z,Z", "Z3,Z3", "Z2,Z5"] {
        let ctx = Context::parse(spec).unwrap();
        for _ in 0..40 {
            let input = random_seed_input(&ctx, &mut rng, 1, 2, 2, 2);
            let w = input.product();
            assert!(mixed_genus_lower_bound(&w) as i64 <= input.genus_bound());
            let out = lemma1_pipeline(&input).unwrap();
            assert!(out.extended_genus <= input.genus_bound());
            if let Some(o) = mixed_genus_search(&w, 1, 4, SearchOptions::default()) {
                assert!(o.lower_bound <= o.score);
                assert_eq!(o.witness.evaluate().unwrap(), w);
            }
        }
    }
}

#[test]
fn searches_are_monotone_in_radius() {
    let ctx = Context::parse("Z,Z").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..25 {
        let w = random_word(&ctx, &mut rng, 6);
        let mut last_mg = u32::MAX;
        let mut last_pos = 0;
        for radius in 1..=3 {
            if let Some(o) = mixed_genus_search(&w, radius, 6, SearchOptions::default()) {
                assert!(o.score <= last_mg, "{w}: mg rose at radius {radius}");
                last_mg = o.score;
            }
            if let Some((p, q)) = quasiperiodicity_search(&w, radius, 3, SearchOptions::default()) {
                assert!(p >= last_pos, "{w}: pos fell at radius {radius}");
                assert_eq!(q.evaluate().unwrap(), w);
                last_pos = p;
            }
        }
    }
}

#[test]
fn parallel_and_sequential_searches_agree() {
    let ctx = Context::parse("Z,Z").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..15 {
        let w = random_word(&ctx, &mut rng, 6);
        let run = |execution| {
            let opts = SearchOptions {
                execution,
                ..SearchOptions::default()
            };
            (
                mixed_genus_search(&w, 2, 5, opts).map(|o| o.witness),
                quasiperiodicity_search(&w, 2, 3, opts),
            )
        };
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
    }
}
