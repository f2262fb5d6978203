//! Named identities and diagrams, each checked when it is built.

use serde::{Deserialize, Serialize};

use crate::diagram::{fig1_diagram, validate_diagram, LabeledDiagram};
use crate::error::{Error, Result};
use crate::factorization::{
    verify_theorem_instance, MixedFactorization, QuasiperiodicFactorization, TheoremInstance,
};
use crate::word::{Context, Ctx, Letter, Word};

pub const FIXTURE_NAMES: [&str; 5] = ["culler3", "abn", "dihedral", "torsion-collapse", "fig1"];

fn word(ctx: &Ctx, s: &str) -> Word {
    Word::parse(ctx, s).expect("fixture words parse")
}

fn two_factor(ctx: &Ctx) -> Result<()> {
    if ctx.len() == 2 {
        Ok(())
    } else {
        Err(Error::InvalidContext(
            "fixture needs two factors a and b".into(),
        ))
    }
}

/// `[a⁻¹ba, a⁻²bab⁻¹][bab⁻¹, b²] = [a,b]³`.
pub fn culler3(ctx: &Ctx) -> Result<TheoremInstance> {
    two_factor(ctx)?;
    let lhs = MixedFactorization::new(
        ctx,
        vec![
            (word(ctx, "a^-1 b a"), word(ctx, "a^-2 b a b^-1")),
            (word(ctx, "b a b^-1"), word(ctx, "b^2")),
        ],
        vec![],
    )?;
    TheoremInstance::new(lhs, vec![(word(ctx, "a^-1 b^-1 a b"), 3)])
}

/// `aⁿ · b^{a^{n−1}} ⋯ b^a · b = (ab)ⁿ` with `x^g = g⁻¹xg`.
pub fn abn(ctx: &Ctx, n: u32) -> Result<TheoremInstance> {
    two_factor(ctx)?;
    if n == 0 {
        return Err(Error::InvalidWitness("n must be positive".into()));
    }
    let one = Word::identity(ctx);
    let a_n = Word::letter(ctx, 0, n as i64)?;
    let mut letters = Vec::new();
    if let [l] = a_n.letters() {
        letters.push((one.clone(), *l));
    }
    for j in (0..n as i64).rev() {
        letters.push((one.multiply(&Word::letter(ctx, 0, -j)?)?, Letter::new(1, 1)));
    }
    let lhs = MixedFactorization::new(ctx, vec![], letters)?;
    TheoremInstance::new(lhs, vec![(word(ctx, "a b"), n)])
}

/// In `Z₂ * Z₂`: `[c,d]ⁿ = [c, (dc)^{n−1}d]`, returned as `(w, x, y)`.
pub fn dihedral(n: u32) -> Result<(Word, Word, Word)> {
    let ctx = Context::new(
        vec![crate::FactorSpec::cyclic(2)?, crate::FactorSpec::cyclic(2)?],
        vec!["c".into(), "d".into()],
    )?;
    let w = word(&ctx, "c d c d").pow(n as i64);
    let x = word(&ctx, "c");
    let y = word(&ctx, "d c")
        .pow(n as i64 - 1)
        .multiply(&word(&ctx, "d"))?;
    if Word::commutator(&x, &y)? != w {
        return Err(Error::Invariant(format!("[c, {y}] differs from [c,d]^{n}")));
    }
    Ok((w, x, y))
}

/// In `Z_m * Z`: `[a,b] · [a,b]^{a⁻¹} ⋯ [a,b]^{a^{1−m}} = 1`.
pub fn torsion_collapse(m: u64) -> Result<QuasiperiodicFactorization> {
    let ctx = Context::parse(&format!("Z{m},Z"))?;
    let conjugators = (0..m as i64)
        .map(|j| Word::letter(&ctx, 0, j))
        .collect::<Result<Vec<_>>>()?;
    let q = QuasiperiodicFactorization::new(
        word(&ctx, "a^-1 b^-1 a b"),
        conjugators,
        vec![1; m as usize],
    )?;
    if !q.evaluate()?.is_empty() {
        return Err(Error::Invariant(format!("collapse fails for m = {m}")));
    }
    Ok(q)
}

/// The torus diagram with face label `(ab)³`, validated.
pub fn fig1(ctx: &Ctx) -> Result<LabeledDiagram> {
    two_factor(ctx)?;
    let d = fig1_diagram(ctx)?;
    if !validate_diagram(&d).is_empty() {
        return Err(Error::Invariant(
            "fig1 violates the diagram conditions".into(),
        ));
    }
    let label = d.face_label(0)?;
    if !label.is_conjugate(&word(ctx, "a b").pow(3))? {
        return Err(Error::Invariant(format!("fig1 face label {label}")));
    }
    Ok(d)
}

/// Outcome of checking a fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub name: String,
    pub factors: String,
    pub statement: String,
    pub holds: bool,
    pub details: serde_json::Value,
}

/// Builds and checks a fixture. `param` is `n` for `abn` and `dihedral` and
/// `m` for `torsion-collapse`; `factors` is ignored by the fixtures with a fixed group.
pub fn run_fixture(name: &str, factors: &str, param: Option<u32>) -> Result<FixtureReport> {
    let report = |factors: String, statement: String, holds: bool, details: serde_json::Value| {
        FixtureReport {
            name: name.to_string(),
            factors,
            statement,
            holds,
            details,
        }
    };
    match name {
        "culler3" | "abn" => {
            let ctx = Context::parse(factors)?;
            let t = if name == "culler3" {
                culler3(&ctx)?
            } else {
                abn(&ctx, param.unwrap_or(5))?
            };
            let v = verify_theorem_instance(&t);
            Ok(report(
                ctx.spec_string(),
                format!("{} = {}", t.lhs, v.rhs_value),
                v.equality_holds && v.consistent(),
                serde_json::to_value(&v).expect("report serializes"),
            ))
        }
        "dihedral" => {
            let n = param.unwrap_or(3);
            let (w, x, y) = dihedral(n)?;
            Ok(report(
                w.context().spec_string(),
                format!("[c,d]^{n} = [{x}, {y}]"),
                true,
                serde_json::json!({ "word": w.to_string(), "x": x.to_string(), "y": y.to_string() }),
            ))
        }
        "torsion-collapse" => {
            let m = param.unwrap_or(2) as u64;
            let q = torsion_collapse(m)?;
            Ok(report(
                q.base().context().spec_string(),
                format!("{q} = 1"),
                true,
                serde_json::json!({ "value": q.evaluate()?.to_string(), "factors": q.m() }),
            ))
        }
        "fig1" => {
            let ctx = Context::parse(factors)?;
            let d = fig1(&ctx)?;
            let m = d.map();
            Ok(report(
                ctx.spec_string(),
                "torus diagram with face label (ab)^3".into(),
                true,
                serde_json::json!({
                    "vertices": m.vertex_count(),
                    "edges": m.edge_count(),
                    "faces": m.face_count(),
                    "euler_characteristic": d.euler_characteristic(),
                    "face_label": d.face_label(0)?.to_string(),
                    "r0": d.r0(),
                    "extended_genus": d.extended_genus()?,
                }),
            ))
        }
        _ => Err(Error::InvalidWitness(format!("unknown fixture `{name}`"))),
    }
}
