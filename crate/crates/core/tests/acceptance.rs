//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use freeprod_core::conjugacy::find_conjugator;
use freeprod_core::diagram::LabeledDiagram;
use freeprod_core::factorization::{
    find_commutator_witness, mixed_genus_lower_bound, mixed_genus_search, mixed_witness_for,
    quasiperiodicity_search, search_roots, verify_theorem_instance, QuasiperiodicFactorization,
    SearchOptions, TheoremInstance, WitnessSources,
};
use freeprod_core::fixtures::{abn, culler3, dihedral, fig1, torsion_collapse};
use freeprod_core::motion::{classify_collisions, fuzz, replay_theorem, simulate, standard_motion};
use freeprod_core::mu::{embed_mu, finite_letter_orders};
use freeprod_core::random::{random_cyclic_word, random_word};
use freeprod_core::surgery::{
    check_property_p, lemma1_pipeline, match_faces, random_seed_input, StepKind,
};
use freeprod_core::{Context, Ctx, Execution, Order, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ctx(spec: &str) -> Ctx {
    Context::parse(spec).unwrap()
}

fn word(ctx: &Ctx, s: &str) -> Word {
    Word::parse(ctx, s).unwrap()
}

fn culler_identity() -> Outcome {
    let zz = ctx("Z,Z");
    let t = culler3(&zz).map_err(|e| e.to_string())?;
    let target = word(&zz, "a^-1 b^-1 a b").pow(3);
    let mut best = Duration::MAX;
    for _ in 0..20 {
        let start = Instant::now();
        let value = t.lhs.evaluate().map_err(|e| e.to_string())?;
        best = best.min(start.elapsed());
        ensure(value == target, || format!("evaluates to {value}"))?;
    }
    ensure(best < Duration::from_millis(1), || format!("took {best:?}"))?;
    Ok(format!("[a,b]^3 reproduced exactly in {best:?}"))
}

fn abn_identity() -> Outcome {
    let zz = ctx("Z,Z");
    for n in 1..=10 {
        let t = abn(&zz, n).map_err(|e| e.to_string())?;
        let value = t.lhs.evaluate().map_err(|e| e.to_string())?;
        let target = word(&zz, "a b").pow(n as i64);
        ensure(value == target, || format!("n = {n}: {value}"))?;
    }
    Ok("n = 1..10 exact".into())
}

fn sharpness_pair() -> Outcome {
    let zz = ctx("Z,Z");
    let mut lines = Vec::new();
    for n in 2..=4u32 {
        let w = word(&zz, "a b").pow(n as i64);
        let start = Instant::now();
        let (pos, _) = quasiperiodicity_search(&w, n as usize + 2, n + 1, SearchOptions::default())
            .ok_or_else(|| format!("n = {n}: no quasiperiodic witness"))?;
        ensure(pos == n - 1, || format!("n = {n}: pos-search gave {pos}"))?;
        let lb = mixed_genus_lower_bound(&w);
        let mg = mixed_genus_search(&w, 2 * n as usize, n + 1, SearchOptions::default())
            .ok_or_else(|| format!("n = {n}: no mixed witness"))?;
        ensure(mg.score == n + 1 && lb == n + 1, || {
            format!("n = {n}: mg-search gave {} from lower bound {lb}", mg.score)
        })?;
        lines.push(format!(
            "n={n} pos={pos} mg={} ({:?})",
            mg.score,
            start.elapsed()
        ));
    }
    for (n, radius) in [(2u32, 4usize), (3, 3), (4, 2)] {
        let w = word(&zz, "a b").pow(n as i64);
        let opts = SearchOptions {
            use_lower_bound: false,
            ..SearchOptions::default()
        };
        let mg = mixed_genus_search(&w, radius, n + 1, opts)
            .ok_or_else(|| format!("n = {n}: unseeded search found nothing"))?;
        ensure(mg.score == n + 1, || {
            format!(
                "n = {n}: unseeded search at radius {radius} gave {}",
                mg.score
            )
        })?;
    }
    Ok(format!("{}; unseeded scans agree", lines.join(", ")))
}

/// `Π (s_j h s_j⁻¹)^{n_j}` with `h` of cyclic length 2..=4, `m <= 3` and `Σ n_j <= 6`.
fn random_quasi<R: Rng>(ctx: &Ctx, rng: &mut R) -> QuasiperiodicFactorization {
    let h = random_cyclic_word(ctx, rng, 4).expect("two factors");
    let m = rng.gen_range(1..=3);
    let mut n = vec![1u32; m];
    for _ in 0..rng.gen_range(0..=6 - m) {
        n[rng.gen_range(0..m)] += 1;
    }
    let s = (0..m).map(|_| random_word(ctx, rng, 2)).collect();
    QuasiperiodicFactorization::new(h, s, n).unwrap()
}

fn theorem_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut sources = WitnessSources::default();
    let mut tight = 0;
    let mut replays = 0;
    for (spec, max_len) in [("Z,Z", 8), ("Z,Z,Z", 6)] {
        let c = ctx(spec);
        for i in 0..500 {
            let q = random_quasi(&c, &mut rng);
            let (mixed, src) = mixed_witness_for(&q, max_len, 2, 6, SearchOptions::default())
                .map_err(|e| format!("{spec} #{i}: {e}"))?;
            sources.searched += src.searched;
            sources.letters += src.letters;
            let t = TheoremInstance::from_quasiperiodic(mixed.clone(), &q).unwrap();
            let v = verify_theorem_instance(&t);
            ensure(
                v.equality_holds && v.theorem_applies && v.inequality_holds,
                || format!("{spec} #{i}: {q} from {mixed}: {v:?}"),
            )?;
            if v.rhs_score + 2 == v.lhs_score {
                tight += 1;
            }
            if c.len() == 2 {
                let r = replay_theorem(&q, &mixed).map_err(|e| format!("{spec} #{i}: {e}"))?;
                ensure(r.consistent(), || {
                    format!("{spec} #{i}: replay of {q} inconsistent")
                })?;
                replays += 1;
            }
        }
    }
    Ok(format!(
        "1000 instances, 0 violations, {tight} tight; {} powers searched, {} written letterwise; {replays} diagram replays",
        sources.searched, sources.letters
    ))
}

fn corollary_roots() -> Outcome {
    let c = ctx("Z5,Z5");
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut roots_seen = 0;
    for i in 0..200 {
        let mut pick = || random_word(&c, &mut rng, 2);
        let (x1, y1, x2, y2) = (pick(), pick(), pick(), pick());
        let w = Word::commutator(&x1, &y1)
            .unwrap()
            .multiply(&Word::commutator(&x2, &y2).unwrap())
            .unwrap();
        let roots = search_roots(&w, 4, 4, Execution::default());
        roots_seen += roots.len();
        if let Some(z) = roots.iter().find(|z| z.cyclic_reduce().core.len() >= 2) {
            return Err(format!("pair #{i}: {z} is a fourth root of {w}"));
        }
    }
    Ok(format!(
        "200 products, {roots_seen} roots found, all conjugate into a factor"
    ))
}

fn dihedral_necessity() -> Outcome {
    for n in 1..=3 {
        let (w, _, _) = dihedral(n).map_err(|e| e.to_string())?;
        let (x, y) =
            find_commutator_witness(&w, 6).ok_or_else(|| format!("n = {n}: no witness"))?;
        ensure(Word::commutator(&x, &y).unwrap() == w, || {
            format!("n = {n}: bad witness")
        })?;
    }
    Ok("[c,d]^n is a commutator for n = 1, 2, 3".into())
}

fn torsion_collapse_fixture() -> Outcome {
    for m in [2, 3] {
        let q = torsion_collapse(m).map_err(|e| e.to_string())?;
        let v = q.evaluate().map_err(|e| e.to_string())?;
        ensure(v.is_empty(), || format!("m = {m}: {v}"))?;
    }
    Ok("empty word for m = 2, 3".into())
}

fn fig1_check(d: &LabeledDiagram, r0: usize, eg: i64) -> Result<(), String> {
    let m = d.map();
    let counts = (
        m.vertex_count(),
        m.edge_count(),
        m.face_count(),
        d.euler_characteristic(),
    );
    ensure(counts == (2, 3, 1, 0), || {
        format!("(V, E, F, χ) = {counts:?}")
    })?;
    let label = d.face_label(0).unwrap();
    let target = word(label.context(), "a b").pow(3);
    ensure(find_conjugator(&label, &target).is_some(), || {
        format!("label {label}")
    })?;
    ensure(d.r0() == r0, || format!("r0 = {}", d.r0()))?;
    let got = d.extended_genus().map_err(|e| e.to_string())?;
    ensure(got == eg, || format!("eg = {got}"))
}

fn fig1_diagram_check() -> Outcome {
    fig1_check(&fig1(&ctx("Z3,Z3")).map_err(|e| e.to_string())?, 0, 2)?;
    fig1_check(&fig1(&ctx("Z5,Z5")).map_err(|e| e.to_string())?, 2, 4)?;
    Ok("V=2 E=3 F=1 χ=0; r0/eg = 0/2 over Z3*Z3 and 2/4 over Z5*Z5".into())
}

fn lemma1_pipeline_check() -> Outcome {
    let specs = ["Z,Z", "Z3,Z3", "Z2,Z3", "Z,Z4", "Z5,Z7"];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut steps = 0;
    for i in 0..50 {
        let c = ctx(specs[i % specs.len()]);
        let input = random_seed_input(&c, &mut rng, 2, 2, 2, 3);
        let out = lemma1_pipeline(&input).map_err(|e| format!("seed #{i}: {e}"))?;
        for s in &out.trace.steps {
            if matches!(
                s.case,
                StepKind::Spur | StepKind::Fold | StepKind::CutAndCap
            ) {
                ensure(
                    matches!((s.tau_before, s.tau_after), (Some(b), Some(a)) if a < b),
                    || format!("seed #{i}: τ did not decrease at {s:?}"),
                )?;
                steps += 1;
            }
        }
        let d = &out.diagram;
        ensure(d.is_reduced(), || format!("seed #{i}: output not reduced"))?;
        ensure(check_property_p(d, input.u_list()), || {
            format!("seed #{i}: (P) fails")
        })?;
        ensure(match_faces(d, input.u_list()), || {
            format!("seed #{i}: face labels lost")
        })?;
        ensure(out.extended_genus <= input.genus_bound(), || {
            format!(
                "seed #{i}: eg {} > {}",
                out.extended_genus,
                input.genus_bound()
            )
        })?;
    }
    Ok(format!(
        "50 seeds, {steps} reduction steps, all invariants held"
    ))
}

fn lemma2_fuzz() -> Outcome {
    let s = fuzz(12, 1000, 2, Execution::default());
    ensure(s.failures.is_empty(), || {
        format!("{} violations, first {:?}", s.failures.len(), s.failures[0])
    })?;
    let c = ctx("Z3,Z3");
    let d = fig1(&c).unwrap();
    let motion = standard_motion(&d, &word(&c, "a b"), &[3]).map_err(|e| e.to_string())?;
    let points = simulate(d.map(), &motion).len();
    ensure(points >= 2, || {
        format!("fig1 standard motion has {points} collision points")
    })?;
    Ok(format!(
        "1000 maps, {} with several cars on a face, least margin {}; fig1 has {points} points",
        s.nontrivial, s.min_margin
    ))
}

fn standard_motion_placement() -> Outcome {
    let specs = ["Z7,Z7", "Z7,Z9", "Z,Z7", "Z8,Z11"];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut irregular = 0;
    let mut i = 0;
    while i < 100 {
        let c = ctx(specs[i % specs.len()]);
        let q = random_quasi(&c, &mut rng);
        let total: u64 = q.exponents().iter().map(|&n| n as u64).sum();
        let torsion_ok = q.base().letter_orders().iter().all(|o| match o {
            Order::Finite(k) => *k > total,
            Order::Infinite => true,
        });
        if !torsion_ok {
            continue;
        }
        let (mixed, _) = mixed_witness_for(&q, 6, 2, 6, SearchOptions::default())
            .map_err(|e| format!("case #{i}: {e}"))?;
        let r = replay_theorem(&q, &mixed).map_err(|e| format!("case #{i}: {e}"))?;
        let b = classify_collisions(&r.diagram, &r.report);
        ensure(b.edge_interior == 0 && b.regular_vertex == 0, || {
            format!("case #{i}: {q} gives {b:?}")
        })?;
        ensure(r.consistent(), || format!("case #{i}: replay inconsistent"))?;
        irregular += b.irregular_vertex;
        i += 1;
    }
    Ok(format!(
        "100 diagrams, {irregular} collisions, all at irregular vertices"
    ))
}

fn embed_mu_contract() -> Outcome {
    let specs = ["Z,Z3,Z", "Z2,Z3,Z5", "Z,Z,Z,Z4", "Z4,Z6"];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..1000 {
        let c = ctx(specs[i % specs.len()]);
        let u = random_word(&c, &mut rng, 8);
        let m = embed_mu(&u);
        ensure(m.is_reduced(), || format!("μ({u}) not reduced"))?;
        ensure(m.finite_letter_orders() == finite_letter_orders(&u), || {
            format!("μ({u}) changes the letter orders")
        })?;
        ensure(
            m.is_conjugate_into_factor() == u.conjugate_into_factor().is_some(),
            || format!("μ({u}) changes factor conjugacy"),
        )?;
    }
    Ok("1000 words, (E1) and (E2) held".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("culler-identity", culler_identity),
        ("abn-identity", abn_identity),
        ("sharpness-pair", sharpness_pair),
        ("theorem-suite", theorem_suite),
        ("corollary-roots", corollary_roots),
        ("dihedral-necessity", dihedral_necessity),
        ("torsion-collapse", torsion_collapse_fixture),
        ("fig1-diagram", fig1_diagram_check),
        ("lemma1-pipeline", lemma1_pipeline_check),
        ("lemma2-fuzz", lemma2_fuzz),
        ("standard-motion-placement", standard_motion_placement),
        ("embed-mu-contract", embed_mu_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{:.2?}]", start.elapsed());
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
