//! Command implementations. Each returns its results object and the checks
//! it ran; the caller wraps them in the report envelope.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;
use wallcross_core::eqk::{verify_relations, determinant};
use wallcross_core::fgab::{gale_dual, hermite_rows};
use wallcross_core::fmk::{
    fm_images, fm_matrix, fm_transform_lift, galois_invariant, lift_checks, monodromy,
    via_arrangement, CaseTag, Oracle,
};
use wallcross_core::gitchambers::{
    anticone_set, extended_set_of, is_generic, tilde_data, trivial_crossing, validate,
    wall_crossing, AnticoneSet,
};
use wallcross_core::ifun::{
    brute_force_count, chart_transition, i_series, support_violations, ModuliChartTransition,
};
use wallcross_core::stackgeom::{fixed_points_of, hypertoric_ideal, reconstruct_beta, stacky_fan_of};
use wallcross_core::{
    subset, CrossingContext, GitData, GitError, ISeries, KContext, SectorSign, Side, StabilityVector,
    WallCrossingData,
};

use crate::input::{InputError, InputSpec};
use crate::report::{self, Check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Chambers,
    Wallcross,
    Fan,
    FixedPoints,
    Fm,
    Monodromy,
    Ifunction,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Chambers => "chambers",
            Command::Wallcross => "wallcross",
            Command::Fan => "fan",
            Command::FixedPoints => "fixed-points",
            Command::Fm => "fm",
            Command::Monodromy => "monodromy",
            Command::Ifunction => "ifunction",
            Command::Verify => "verify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Command-line settings that override the input's `options`.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub bound: Option<BigRational>,
    pub sector_sign: Option<SectorSign>,
    pub side_plus: Option<bool>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{command}: {msg}")]
    Computation { command: &'static str, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Computation { .. } => 3,
        }
    }
}

pub struct Outcome {
    pub report: Value,
    pub checks: Vec<Check>,
}

impl Outcome {
    /// 0 when every check passed, 2 when a validation check failed, 3
    /// otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| !c.passed && c.validation) {
            2
        } else if self.checks.iter().any(|c| !c.passed) {
            3
        } else {
            0
        }
    }
}

type Res<T> = Result<T, CliError>;

fn fail<E: fmt::Display>(command: Command) -> impl Fn(E) -> CliError {
    move |e| CliError::Computation {
        command: command.name(),
        msg: e.to_string(),
    }
}

pub fn run(command: Command, spec: &InputSpec, opts: &RunOptions) -> Res<Outcome> {
    if command != Command::Validate {
        spec.check_pairing()?;
    }
    let g = spec.git()?;
    let (results, checks) = match command {
        Command::Validate => cmd_validate(&g, spec),
        Command::Chambers => cmd_chambers(&g, spec),
        Command::Wallcross => cmd_wallcross(&g, spec),
        Command::Fan => cmd_fan(&g, spec),
        Command::FixedPoints => cmd_fixed_points(&g, spec),
        Command::Fm => cmd_fm(&g, spec),
        Command::Monodromy => cmd_monodromy(&g, spec),
        Command::Ifunction => cmd_ifunction(&g, spec, opts),
        Command::Verify => cmd_verify(&g, spec, opts),
    }?;
    let report = report::envelope(command.name(), &spec.digest(), results, &checks);
    Ok(Outcome { report, checks })
}

fn thetas(spec: &InputSpec) -> Vec<(&'static str, StabilityVector)> {
    let mut v = vec![("theta_plus", spec.theta_plus())];
    if let Some(t) = spec.theta_minus() {
        v.push(("theta_minus", t));
    }
    v
}

fn anticones(g: &GitData, t: &StabilityVector, c: Command) -> Res<AnticoneSet> {
    anticone_set(g, t).map_err(fail(c))
}

/// The crossing between the two chambers; chambers that share every
/// minimal anticone give the trivial crossing.
fn crossing(g: &GitData, spec: &InputSpec, c: Command) -> Res<(WallCrossingData, &'static str)> {
    let tm = spec.theta_minus().ok_or_else(|| CliError::Computation {
        command: c.name(),
        msg: "theta_minus is required".into(),
    })?;
    let tp = spec.theta_plus();
    match wall_crossing(g, &tp, &tm) {
        Ok(wc) => Ok((wc, "wall")),
        Err(GitError::SameChamber) => trivial_crossing(g, &tp, &tm)
            .map(|wc| (wc, "shared"))
            .map_err(fail(c)),
        Err(e) => Err(fail(c)(e)),
    }
}

fn cmd_validate(g: &GitData, spec: &InputSpec) -> Res<(Value, Vec<Check>)> {
    let mut res = serde_json::Map::new();
    let mut checks = Vec::new();
    for (name, t) in thetas(spec) {
        let rep = validate(g, &t);
        let side = if name == "theta_plus" { "plus" } else { "minus" };
        let list: Vec<Check> = rep.checks.iter().map(|c| Check::from_validation(side, c)).collect();
        res.insert(
            name.into(),
            json!({
                "passed": rep.all_passed(),
                "failed": list.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect::<Vec<_>>(),
            }),
        );
        checks.extend(list);
    }
    Ok((Value::Object(res), checks))
}

fn chamber_json(g: &GitData, t: &StabilityVector, c: Command) -> Res<Value> {
    let a = anticones(g, t, c)?;
    Ok(json!({
        "theta": report::stability(t),
        "generic": is_generic(g, t),
        "minimal_anticones": report::sets(&a.minimal),
        "extended_set": report::set(extended_set_of(&a)),
    }))
}

fn cmd_chambers(g: &GitData, spec: &InputSpec) -> Res<(Value, Vec<Check>)> {
    let mut res = serde_json::Map::new();
    for (name, t) in thetas(spec) {
        res.insert(name.into(), chamber_json(g, &t, Command::Chambers)?);
    }
    Ok((Value::Object(res), Vec::new()))
}

fn wall_json(wc: &WallCrossingData, kind: &str) -> Res<Value> {
    let c = Command::Wallcross;
    let t = tilde_data(wc);
    let mut tilde_anticones = serde_json::Map::new();
    for (name, th) in [("theta", &t.theta), ("theta_plus", &t.theta_plus), ("theta_minus", &t.theta_minus)] {
        tilde_anticones.insert(name.into(), report::sets(&anticones(&t.git, th, c)?.minimal));
    }
    Ok(json!({
        "kind": kind,
        "e": report::ints(&wc.e),
        "pairings_with_e": (0..wc.git.num_chars()).map(|i| report::int(&wc.pairing_e(i))).collect::<Vec<_>>(),
        "m_plus": report::set(wc.m_plus),
        "m_minus": report::set(wc.m_minus),
        "m_zero": report::set(wc.m_zero),
        "wall_basis": report::int_rows(&wc.wall_basis),
        "theta_zero": report::qs(&wc.theta_zero),
        "plus_anticones": report::sets(&wc.plus.minimal),
        "minus_anticones": report::sets(&wc.minus.minimal),
        "shared_anticones": report::sets(&wc.shared()),
        "tilde": {
            "characters": report::int_rows(t.git.characters()),
            "theta": report::stability(&t.theta),
            "theta_plus": report::stability(&t.theta_plus),
            "theta_minus": report::stability(&t.theta_minus),
            "minimal_anticones": Value::Object(tilde_anticones),
        },
    }))
}

fn cmd_wallcross(g: &GitData, spec: &InputSpec) -> Res<(Value, Vec<Check>)> {
    let (wc, kind) = crossing(g, spec, Command::Wallcross)?;
    let balanced = subset::size(wc.m_plus) == subset::size(wc.m_minus);
    let checks = vec![Check::new(
        "wall.balanced",
        balanced,
        format!("|M+| = {}, |M-| = {}", subset::size(wc.m_plus), subset::size(wc.m_minus)),
    )];
    Ok((wall_json(&wc, kind)?, checks))
}

fn cmd_fan(g: &GitData, spec: &InputSpec) -> Res<(Value, Vec<Check>)> {
    let mut res = serde_json::Map::new();
    for (name, t) in thetas(spec) {
        let a = anticones(g, &t, Command::Fan)?;
        let f = stacky_fan_of(g, &a);
        let ext: Vec<Value> = f
            .ext_support
            .iter()
            .map(|&(i, ok)| json!({ "index": i + 1, "in_support": ok }))
            .collect();
        res.insert(
            name.into(),
            json!({
                "n_group": report::group(&f.n_group),
                "b": report::int_rows(&f.b),
                "cones": report::sets(&f.cones),
                "top_cones": report::sets(&f.top_cones),
                "extended_set": report::set(f.ext),
                "extended_support": ext,
            }),
        );
    }
    let ideal = hypertoric_ideal(g);
    res.insert(
        "hypertoric_ideal".into(),
        json!({ "generators": report::int_rows(&ideal.generators), "text": ideal.format() }),
    );
    Ok((Value::Object(res), Vec::new()))
}

fn atlas_json(g: &GitData, t: &StabilityVector, c: Command) -> Res<Value> {
    let a = anticones(g, t, c)?;
    let atlas = fixed_points_of(g, &a).map_err(fail(c))?;
    let points: Vec<Value> = atlas
        .points
        .iter()
        .enumerate()
        .map(|(p, fp)| {
            let elements: Vec<Value> = (0..fp.order())
                .map(|e| {
                    let ip = wallcross_core::InertiaPoint { point: p, element: e };
                    json!({ "g": report::qs(&fp.elements[e]), "label": report::qs(&atlas.label(g, ip)) })
                })
                .collect();
            json!({
                "delta": report::set(fp.delta),
                "isotropy": report::group(&fp.isotropy),
                "order": fp.order(),
                "characters": report::int_rows(&fp.characters),
                "elements": elements,
            })
        })
        .collect();
    Ok(json!({
        "points": points,
        "orders": atlas.points.iter().map(|p| p.order()).collect::<Vec<_>>(),
        "total_size": atlas.total_size(),
        "smooth": atlas.is_smooth(),
    }))
}

fn cmd_fixed_points(g: &GitData, spec: &InputSpec) -> Res<(Value, Vec<Check>)> {
    let mut res = serde_json::Map::new();
    for (name, t) in thetas(spec) {
        res.insert(name.into(), atlas_json(g, &t, Command::FixedPoints)?);
    }
    Ok((Value::Object(res), Vec::new()))
}

fn case_json(ctx: &CrossingContext, point: usize) -> Value {
    let delta = report::set(ctx.minus.atlas.points[point].delta);
    match &ctx.cases[point] {
        CaseTag::Shared { plus_point } => json!({
            "delta": delta,
            "case": "shared",
            "plus_point": report::set(ctx.plus.atlas.points[*plus_point].delta),
        }),
        CaseTag::Flopped { j, l } => json!({ "delta": delta, "case": "flopped", "j": j + 1, "l": l }),
        CaseTag::Degenerate { negatives } => {
            json!({ "delta": delta, "case": "degenerate", "negatives": report::set(*negatives) })
        }
    }
}

fn fm_checks(ctx: &CrossingContext, c: Command) -> Res<Vec<Check>> {
    let images = fm_images(ctx).map_err(fail(c))?;
    let mut checks = Vec::new();
    let galois_bad: Vec<String> = images
        .iter()
        .zip(&ctx.minus_basis)
        .filter(|(img, _)| !galois_invariant(ctx, img))
        .map(|(_, b)| ctx.minus.basis_label(b))
        .collect();
    checks.push(Check::new(
        "fm.galois_invariance",
        galois_bad.is_empty(),
        format!("images outside the plus-side field: {galois_bad:?}"),
    ));
    let shifted: Vec<bool> = ctx
        .minus_basis
        .par_iter()
        .zip(&images)
        .map(|(b, img)| {
            let rho = &ctx.minus.atlas.points[b.point].characters[b.character];
            fm_transform_lift(ctx, b.point, rho, 1).map(|x| &x == img)
        })
        .collect::<Result<_, _>>()
        .map_err(fail(c))?;
    checks.push(Check::new(
        "fm.branch_independence",
        shifted.iter().all(|&x| x),
        "images recomputed with the l-th roots shifted by one step",
    ));
    let lifts = lift_checks(ctx).map_err(fail(c))?;
    let bad: Vec<String> = lifts
        .iter()
        .filter(|l| !l.agrees)
        .map(|l| format!("{} + D{}", l.basis_label, l.shifted_by + 1))
        .collect();
    checks.push(Check::new(
        "fm.lift_independence",
        bad.is_empty(),
        format!("{} lifts compared; disagreements: {bad:?}", lifts.len()),
    ));
    if let Ok(oracle) = Oracle::new(ctx) {
        let mut ok = true;
        for (img, b) in images.iter().zip(&ctx.minus_basis) {
            ok &= oracle.apply(ctx, &b.class).map_err(fail(c))? == *img;
        }
        checks.push(Check::new(
            "fm.localization_oracle",
            ok,
            "transform against localization on the common blowup",
        ));
    }
    Ok(checks)
}

fn cmd_fm(g: &GitData, spec: &InputSpec) -> Res<(Value, Vec<Check>)> {
    let c = Command::Fm;
    let (wc, kind) = crossing(g, spec, c)?;
    let ctx = CrossingContext::new(&wc).map_err(fail(c))?;
    let labels = g.weight_labels();
    let mat = fm_matrix(&ctx).map_err(fail(c))?;
    let det = mat.determinant().ok_or_else(|| fail(c)("determinant undefined"))?;
    let images = fm_images(&ctx).map_err(fail(c))?;
    let points = ctx.plus.inertia_points();
    let images_json: Vec<Value> = images
        .iter()
        .zip(&ctx.minus_basis)
        .map(|(img, b)| {
            let values: Vec<Value> = img
                .values
                .iter()
                .zip(points)
                .map(|(v, ip)| {
                    json!({
                        "delta": report::set(ctx.plus.atlas.points[ip.point].delta),
                        "element": ip.element,
                        "value": report::scalar(v, &labels),
                    })
                })
                .collect();
            json!({ "source": ctx.minus.basis_label(b), "restrictions": values })
        })
        .collect();
    let mut checks = vec![Check::new("fm.determinant_nonzero", !det.is_zero(), "FM matrix determinant")];
    checks.extend(fm_checks(&ctx, c)?);
    let res = json!({
        "kind": kind,
        "order": ctx.order(),
        "weights": labels,
        "cases": (0..ctx.cases.len()).map(|p| case_json(&ctx, p)).collect::<Vec<_>>(),
        "plus_basis": mat.row_labels,
        "minus_basis": mat.col_labels,
        "matrix": report::matrix(&mat, &labels),
        "determinant": report::scalar(&det, &labels),
        "images": images_json,
    });
    Ok((res, checks))
}

fn cmd_monodromy(g: &GitData, spec: &InputSpec) -> Res<(Value, Vec<Check>)> {
    let c = Command::Monodromy;
    let (wc, kind) = crossing(g, spec, c)?;
    let ctx = CrossingContext::new(&wc).map_err(fail(c))?;
    let labels = g.weight_labels();
    let mono = monodromy(&ctx).map_err(fail(c))?;
    let det = mono.determinant().ok_or_else(|| fail(c)("determinant undefined"))?;
    let identity = mono.is_identity();
    let mut checks = vec![Check::new("monodromy.invertible", !det.is_zero(), "determinant of the composite")];
    if kind == "shared" {
        checks.push(Check::new(
            "monodromy.identity_when_shared",
            identity,
            "every minimal anticone is shared",
        ));
    }
    let res = json!({
        "kind": kind,
        "order": ctx.order(),
        "weights": labels,
        "matrix": report::matrix(&mono, &labels),
        "determinant": report::scalar(&det, &labels),
        "is_identity": identity,
    });
    Ok((res, checks))
}

struct SeriesSetup {
    side_plus: bool,
    theta: StabilityVector,
    bound: BigRational,
    sign: SectorSign,
    chart: Option<ModuliChartTransition>,
}

fn series_setup(g: &GitData, spec: &InputSpec, opts: &RunOptions, side_plus: Option<bool>) -> Res<SeriesSetup> {
    let c = Command::Ifunction;
    let side_plus = side_plus
        .or(opts.side_plus)
        .or(spec.options.side_plus)
        .unwrap_or(true);
    let bound = opts
        .bound
        .clone()
        .or_else(|| spec.options.bound.clone())
        .unwrap_or_else(|| BigRational::from_integer(2.into()));
    let sign = opts.sector_sign.or(spec.options.sector_sign).unwrap_or_default();
    let theta = if side_plus {
        spec.theta_plus()
    } else {
        spec.theta_minus().ok_or_else(|| fail(c)("theta_minus is required for the minus side"))?
    };
    let chart = match spec.theta_minus() {
        Some(tm) => match wall_crossing(g, &spec.theta_plus(), &tm) {
            Ok(wc) => Some(chart_transition(&wc).map_err(fail(c))?),
            Err(_) => None,
        },
        None => None,
    };
    Ok(SeriesSetup {
        side_plus,
        theta,
        bound,
        sign,
        chart,
    })
}

fn build_series(g: &GitData, s: &SeriesSetup) -> Res<ISeries> {
    let basis = s.chart.as_ref().map(|ch| ch.basis(s.side_plus));
    i_series(g, &s.theta, &s.bound, basis, s.sign).map_err(fail(Command::Ifunction))
}

fn series_json(series: &ISeries, s: &SeriesSetup) -> Value {
    let terms: Vec<Value> = series
        .terms
        .iter()
        .map(|t| {
            let factors: Vec<Value> = t
                .factors
                .iter()
                .map(|f| {
                    json!({
                        "index": f.index + 1,
                        "position": if f.denominator { "denominator" } else { "numerator" },
                        "a": report::qs(&f.a_values),
                    })
                })
                .collect();
            json!({
                "degree": report::qs(&t.degree.d),
                "pairings": report::qs(&t.degree.pairings),
                "monomial": report::qs(&t.monomial),
                "factors": factors,
                "sector": { "fractions": report::qs(&t.sector.fractions), "age": report::q(&t.sector.age) },
                "text": t.format(),
            })
        })
        .collect();
    let chart = s.chart.as_ref().map(|ch| {
        json!({
            "c_i": report::qs(&ch.c_i),
            "c": report::q(&ch.c),
            "basis_plus": report::int_rows(&ch.basis_plus),
            "basis_minus": report::int_rows(&ch.basis_minus),
        })
    });
    json!({
        "side": if s.side_plus { "plus" } else { "minus" },
        "bound": report::q(&s.bound),
        "sector_sign": match s.sign { SectorSign::Minus => "minus", SectorSign::Plus => "plus" },
        "sigma": series.sigma.to_string(),
        "basis": report::int_rows(&series.sigma.basis),
        "extended_set": report::set(series.ext),
        "chart": chart.unwrap_or(Value::Null),
        "terms": terms,
    })
}

fn series_checks(g: &GitData, series: &ISeries, s: &SeriesSetup, prefix: &str) -> Res<Vec<Check>> {
    let c = Command::Ifunction;
    let mut checks = Vec::new();
    if let Some(t) = series.terms.iter().find(|t| t.degree.is_zero()) {
        checks.push(Check::new(format!("{prefix}.identity_term"), t.is_identity(), "d = 0 term is 1"));
    }
    let den = 12;
    let tele = series.terms.iter().all(|t| {
        t.factors.iter().all(|f| {
            let x = &t.degree.pairings[f.index];
            let ok_den = BigInt::from(den) % x.denom() == BigInt::zero();
            !ok_den || f.a_values.len() == brute_force_count(x, den)
        })
    });
    checks.push(Check::new(
        format!("{prefix}.telescoping"),
        tele,
        "factor counts against a-grid enumeration",
    ));
    let bad = support_violations(g, &s.theta, series).map_err(fail(c))?;
    checks.push(Check::new(
        format!("{prefix}.sector_support"),
        bad.is_empty(),
        format!("terms with no matching inertia point: {bad:?}"),
    ));
    Ok(checks)
}

fn cmd_ifunction(g: &GitData, spec: &InputSpec, opts: &RunOptions) -> Res<(Value, Vec<Check>)> {
    let s = series_setup(g, spec, opts, None)?;
    let series = build_series(g, &s)?;
    let checks = series_checks(g, &series, &s, "ifun")?;
    Ok((series_json(&series, &s), checks))
}

fn upward_closed(a: &AnticoneSet) -> Option<bool> {
    let n = a.num_chars;
    if n > 16 {
        return None;
    }
    let ok = (0u32..1 << n).into_par_iter().all(|s| {
        !a.contains(s) || (0..n).all(|i| a.contains(s | 1 << i))
    });
    Some(ok)
}

fn cmd_verify(g: &GitData, spec: &InputSpec, opts: &RunOptions) -> Res<(Value, Vec<Check>)> {
    let c = Command::Verify;
    let (_, mut checks) = cmd_validate(g, spec)?;
    if checks.iter().any(|x| !x.passed) {
        return Ok((json!({ "stopped": "validation failed" }), checks));
    }

    // combinatorics
    for (name, t) in thetas(spec) {
        let a = anticones(g, &t, c)?;
        if let Some(ok) = upward_closed(&a) {
            checks.push(Check::new(format!("anticones.{name}.upward_closed"), ok, "exhaustive over all subsets"));
        }
    }
    let coker = reconstruct_beta(g);
    let back = gale_dual(&coker.projection, &coker.group).map_err(fail(c))?;
    checks.push(Check::new(
        "fan.gale_roundtrip",
        back == hermite_rows(&g.d_matrix()),
        "Gale dual of the reconstructed map against the Hermite form of D",
    ));

    // K-theory on each side
    for (name, t) in thetas(spec) {
        let a = anticones(g, &t, c)?;
        let atlas = fixed_points_of(g, &a).map_err(fail(c))?;
        let m = wallcross_core::eqk::scalar_order(&[&atlas], &[]);
        let ctx = KContext::from_anticones(g, a, Side::Plus, m).map_err(fail(c))?;
        let rel = verify_relations(&ctx);
        checks.push(Check::new(format!("ktheory.{name}.relations"), rel.passed(), rel.failures.join("; ")));
        let basis = ctx.structure_basis();
        let mut blocks_ok = true;
        let mut support_ok = true;
        for p in 0..ctx.atlas.points.len() {
            let block = ctx.restriction_block(&basis, p);
            blocks_ok &= determinant(&block).is_some_and(|d| !d.is_zero());
            for b in basis.iter().filter(|b| b.point != p) {
                for el in 0..ctx.atlas.points[p].order() {
                    let pos = ctx.position(wallcross_core::InertiaPoint { point: p, element: el });
                    support_ok &= b.class.values[pos].is_zero();
                }
            }
        }
        checks.push(Check::new(format!("ktheory.{name}.block_determinants"), blocks_ok, "structure basis blocks"));
        checks.push(Check::new(format!("ktheory.{name}.basis_support"), support_ok, "basis classes vanish off their point"));
    }

    let mut results = serde_json::Map::new();
    if spec.theta_minus.is_some() {
        let (wc, kind) = crossing(g, spec, c)?;
        results.insert("crossing".into(), json!(kind));
        checks.push(Check::new(
            "wall.balanced",
            subset::size(wc.m_plus) == subset::size(wc.m_minus),
            "|M+| = |M-|",
        ));
        let ctx = CrossingContext::new(&wc).map_err(fail(c))?;
        let mat = fm_matrix(&ctx).map_err(fail(c))?;
        checks.push(Check::new(
            "fm.determinant_nonzero",
            mat.determinant().is_some_and(|d| !d.is_zero()),
            "FM matrix determinant",
        ));
        checks.extend(fm_checks(&ctx, c)?);
        let (g2, tp2, tm2) = via_arrangement(g, &wc.theta_plus, &wc.theta_minus).map_err(fail(c))?;
        let smooth = ctx.plus.atlas.is_smooth() && ctx.minus.atlas.is_smooth();
        if kind == "wall" && (smooth || g2.characters() == g.characters()) {
            let wc2 = wall_crossing(&g2, &tp2, &tm2).map_err(fail(c))?;
            let mat2 = fm_matrix(&CrossingContext::new(&wc2).map_err(fail(c))?).map_err(fail(c))?;
            checks.push(Check::new(
                "fm.arrangement_side",
                mat2 == mat,
                "matrix recomputed from the data rebuilt out of the arrangement",
            ));
        }
        let mono = monodromy(&ctx).map_err(fail(c))?;
        checks.push(Check::new(
            "monodromy.invertible",
            mono.determinant().is_some_and(|d| !d.is_zero()),
            "determinant of the composite",
        ));
        if kind == "shared" {
            checks.push(Check::new("monodromy.identity_when_shared", mono.is_identity(), "all anticones shared"));
        }
        results.insert("monodromy_is_identity".into(), json!(mono.is_identity()));
    }

    // I-function on each side
    let sides: Vec<bool> = if spec.theta_minus.is_some() { vec![true, false] } else { vec![true] };
    for side in sides {
        let s = series_setup(g, spec, opts, Some(side))?;
        let series = build_series(g, &s)?;
        let prefix = if side { "ifun.plus" } else { "ifun.minus" };
        checks.extend(series_checks(g, &series, &s, prefix)?);
        if let Some(ch) = &s.chart {
            let ok = series.terms.iter().all(|t| {
                let y = wallcross_core::ifun::monomial(&ch.basis_plus, &t.degree.d);
                let yt = wallcross_core::ifun::monomial(&ch.basis_minus, &t.degree.d);
                ch.pull_exponents(&yt) == y
            });
            checks.push(Check::new(format!("{prefix}.chart_law"), ok, "monomials under the chart transition"));
        }
    }

    let failed = checks.iter().filter(|x| !x.passed).count();
    results.insert("checks_run".into(), json!(checks.len()));
    results.insert("checks_failed".into(), json!(failed));
    Ok((Value::Object(results), checks))
}
