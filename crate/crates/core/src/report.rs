//! Batch runs: a serializable [`RunConfig`] goes in, a deterministic
//! [`Report`] comes out.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::corpus;
use crate::cubic::AbstractCubic;
use crate::equivalence::{ch_axioms_check, quotient, u2, u3, universal, Partition};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::generation::{closure, ClosureConfig, Rule};
use crate::geometry::{collinearity, CubicForm};
use crate::split::{BaseConfig, SplitSurface};
use crate::words::{self, Word};

pub const TOOL: &str = "cubic-compose";

/// Where the cubic form comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Input {
    /// `fermat-curve`, `fermat-surface`, `diagonal-a`, `diagonal:<c>` (with
    /// `c` an element index) or `f2:<mask>`.
    Corpus { name: String },
    /// A form in its JSON representation.
    Form { form: Value },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumMode {
    /// Every form over F_2.
    Exhaustive,
    /// `X^3 + Y^3 + Z^3 + c W^3` for every nonzero `c`.
    Diagonal,
    /// Seeded random forms.
    Sampled { samples: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceFilter {
    pub point_count: Option<usize>,
    pub all_eckardt: Option<bool>,
    pub line_count: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivKind {
    Universal,
    U3,
    U2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordOp {
    Nf,
    Eq,
    Ord,
    Psi,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCheck {
    #[serde(rename = "5.2")]
    Generation,
    #[serde(rename = "5.3")]
    SelfComposition,
    #[serde(rename = "5.4")]
    U3Trivial,
    #[serde(rename = "5.7.6")]
    Elimination,
    #[serde(rename = "5.7.7")]
    ExceptionalTriple,
    GroupLaw,
}

impl std::str::FromStr for SplitCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.into()))
            .map_err(|_| Error::InvalidInput(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verb", rename_all = "kebab-case")]
pub enum Command {
    EnumerateSurfaces {
        mode: EnumMode,
        filter: SurfaceFilter,
        /// Matching forms listed in full.
        limit: usize,
    },
    Collinearity,
    Equivalence {
        kind: EquivKind,
    },
    Quotient,
    Word {
        op: WordOp,
        words: Vec<Word>,
        letter: Option<usize>,
    },
    Generate {
        rule: Rule,
        points: Vec<usize>,
    },
    SplitBuild {
        base: Option<Value>,
    },
    SplitCheck {
        base: Option<Value>,
        check: SplitCheck,
        samples: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub field: Option<FieldSpec>,
    pub input: Option<Input>,
    pub budget: usize,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            field: None,
            input: None,
            budget: words::DEFAULT_BUDGET,
            seed: None,
        }
    }

    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    fn field(&self) -> Result<&FieldSpec> {
        self.field
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("--field is required".into()))
    }

    fn rng_seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::InvalidInput("sampled runs need --seed".into()))
    }

    fn form(&self) -> Result<CubicForm> {
        match &self.input {
            None => Err(Error::InvalidInput("no input form (--form or --corpus)".into())),
            Some(Input::Form { form }) => CubicForm::from_json(form),
            Some(Input::Corpus { name }) => corpus_form(name, self.field.as_ref()),
        }
    }
}

fn corpus_form(name: &str, field: Option<&FieldSpec>) -> Result<CubicForm> {
    if let Some(mask) = name.strip_prefix("f2:") {
        let mask = mask
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad mask {mask:?}")))?;
        return corpus::f2_form(mask).ok_or(Error::ZeroForm);
    }
    let f = field.ok_or_else(|| Error::InvalidInput("--field is required".into()))?;
    match name {
        "fermat-curve" => Ok(corpus::fermat_curve(f)),
        "fermat-surface" => Ok(corpus::fermat_surface(f)),
        "diagonal-a" => Ok(corpus::diagonal_a_surface(f)),
        _ => {
            let c = name
                .strip_prefix("diagonal:")
                .and_then(|c| c.parse::<u32>().ok())
                .filter(|&c| c > 0 && c < f.q())
                .ok_or_else(|| Error::InvalidInput(format!("unknown corpus entry {name:?}")))?;
            let c = f.elements().nth(c as usize).unwrap();
            Ok(corpus::diagonal_surface(f, c))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub config_hash: String,
    pub results: Value,
}

impl Report {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// The embedded hash matches the embedded config.
    pub fn verify_hash(&self) -> bool {
        self.config.hash() == self.config_hash
    }
}

pub fn run(config: &RunConfig) -> Result<Report> {
    if config.budget == 0 {
        return Err(Error::InvalidInput("budget must be positive".into()));
    }
    let results = match &config.command {
        Command::EnumerateSurfaces {
            mode,
            filter,
            limit,
        } => enumerate_surfaces(config, *mode, filter, *limit)?,
        Command::Collinearity => collinearity_results(&config.form()?)?,
        Command::Equivalence { kind } => equivalence_results(&config.form()?, *kind)?,
        Command::Quotient => quotient_results(&config.form()?)?,
        Command::Word { op, words, letter } => {
            word_results(&collinearity(&config.form()?)?, *op, words, *letter, config.budget)?
        }
        Command::Generate { rule, points } => {
            let p = collinearity(&config.form()?)?;
            let cfg = ClosureConfig {
                max_rounds: config.budget,
                ..ClosureConfig::new(*rule)
            };
            let r = closure(&p, &points.iter().copied().collect(), &cfg)?;
            if !r.complete {
                return Err(Error::CapExhausted { rounds: r.rounds });
            }
            serde_json::to_value(r)?
        }
        Command::SplitBuild { base } => split_surface(config, base.as_ref())?.summary(),
        Command::SplitCheck {
            base,
            check,
            samples,
        } => split_check(config, &split_surface(config, base.as_ref())?, check, *samples)?,
    };
    Ok(Report {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        config_hash: config.hash(),
        results,
    })
}

/// Rational points, Eckardt points and rational lines of a surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceSummary {
    pub form: Value,
    pub points: usize,
    pub eckardt: usize,
    pub lines: usize,
    pub universal_classes: usize,
}

impl SurfaceSummary {
    pub fn of(form: &CubicForm) -> Result<Self> {
        let pts = form.points();
        let mut eckardt = 0;
        for x in &pts {
            eckardt += form.is_eckardt(x)? as usize;
        }
        Ok(SurfaceSummary {
            form: form.to_json(),
            points: pts.len(),
            eckardt,
            lines: form.lines().len(),
            universal_classes: universal(&collinearity(form)?).0.class_count(),
        })
    }
}

fn passes(form: &CubicForm, filter: &SurfaceFilter) -> Result<bool> {
    let pts = form.points();
    if filter.point_count.is_some_and(|n| n != pts.len()) {
        return Ok(false);
    }
    if !form.is_smooth() {
        return Ok(false);
    }
    if let Some(want) = filter.all_eckardt {
        let mut all = true;
        for x in &pts {
            all &= form.is_eckardt(x)?;
        }
        if all != want {
            return Ok(false);
        }
    }
    Ok(filter.line_count.is_none_or(|n| n == form.lines().len()))
}

fn enumerate_surfaces(
    config: &RunConfig,
    mode: EnumMode,
    filter: &SurfaceFilter,
    limit: usize,
) -> Result<Value> {
    let f = config.field()?;
    let candidates: Vec<CubicForm> = match mode {
        EnumMode::Exhaustive => {
            if f.q() != 2 {
                return Err(Error::InvalidInput(format!(
                    "exhaustive enumeration over F_{} is infeasible; use sampled mode",
                    f.q()
                )));
            }
            let smooth: Vec<u32> = (1u32..1 << 20)
                .into_par_iter()
                .filter(|&m| corpus::f2_form(m).is_some_and(|c| c.is_smooth()))
                .collect();
            let matched: Vec<u32> = smooth
                .par_iter()
                .copied()
                .filter(|&m| passes(&corpus::f2_form(m).unwrap(), filter).unwrap_or(false))
                .collect();
            let listed: Vec<SurfaceSummary> = matched
                .iter()
                .take(limit)
                .map(|&m| SurfaceSummary::of(&corpus::f2_form(m).unwrap()))
                .collect::<Result<_>>()?;
            return Ok(json!({
                "mode": "exhaustive",
                "smooth": smooth.len(),
                "matched": matched.len(),
                "listed": listed,
                "masks": matched.iter().take(limit).collect::<Vec<_>>(),
            }));
        }
        EnumMode::Diagonal => f
            .elements()
            .filter(|c| !c.is_zero())
            .map(|c| corpus::diagonal_surface(f, c))
            .collect(),
        EnumMode::Sampled { samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed()?);
            (0..samples).map(|_| corpus::random_form(f, 3, &mut rng)).collect()
        }
    };
    let mut matched = Vec::new();
    for c in &candidates {
        if passes(c, filter)? {
            matched.push(c);
        }
    }
    let listed: Vec<SurfaceSummary> = matched
        .iter()
        .take(limit)
        .map(|c| SurfaceSummary::of(c))
        .collect::<Result<_>>()?;
    Ok(json!({
        "mode": mode,
        "candidates": candidates.len(),
        "matched": matched.len(),
        "listed": listed,
    }))
}

fn collinearity_results(form: &CubicForm) -> Result<Value> {
    let p = collinearity(form)?;
    let f = form.field();
    Ok(json!({
        "points": p.labels().unwrap().iter().map(|x| x.to_json(f)).collect::<Vec<_>>(),
        "cubic": p.to_json(),
        "lenient": p.validate(false),
        "strict": p.validate(true),
    }))
}

fn partition_json(r: &Partition) -> Value {
    json!({ "class_count": r.class_count(), "classes": r.classes() })
}

fn equivalence_results(form: &CubicForm, kind: EquivKind) -> Result<Value> {
    let p = collinearity(form)?;
    Ok(match kind {
        EquivKind::Universal => {
            let (u, trace) = universal(&p);
            json!({
                "partition": partition_json(&u),
                "stage_class_counts": trace.class_counts(),
                "stabilized_at": trace.stabilized_at,
            })
        }
        EquivKind::U3 => json!({ "partition": partition_json(&u3(&p)) }),
        EquivKind::U2 => json!({ "partition": partition_json(&u2(&p)?) }),
    })
}

fn quotient_results(form: &CubicForm) -> Result<Value> {
    let p = collinearity(form)?;
    let (u, _) = universal(&p);
    let q = quotient(&p, &u)?;
    Ok(json!({
        "classes": u.classes(),
        "table": q.rows(),
        "ch_axioms": ch_axioms_check(&q),
    }))
}

fn word_results(
    p: &AbstractCubic,
    op: WordOp,
    ws: &[Word],
    letter: Option<usize>,
    budget: usize,
) -> Result<Value> {
    let want = |n: usize| {
        if ws.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("expected {n} word(s)")))
        }
    };
    if let Some(&bad) = ws.iter().flatten().find(|&&x| x >= p.len()) {
        return Err(Error::IndexOutOfRange(bad));
    }
    match op {
        WordOp::Nf => {
            want(1)?;
            let nf = words::normal_form(&ws[0], p, budget);
            if nf.budget_hit {
                return Err(Error::BudgetExhausted { budget });
            }
            Ok(serde_json::to_value(nf)?)
        }
        WordOp::Eq => {
            want(2)?;
            Ok(json!({ "equal": words::words_equal(&ws[0], &ws[1], p, budget)? }))
        }
        WordOp::Ord => {
            want(1)?;
            let x = letter.ok_or_else(|| Error::InvalidInput("ord needs --letter".into()))?;
            Ok(json!({ "ord": words::ord(&ws[0], p, x, budget)? }))
        }
        WordOp::Psi => {
            want(1)?;
            Ok(serde_json::to_value(words::psi(&ws[0], p, budget)?)?)
        }
    }
}

fn split_surface(config: &RunConfig, base: Option<&Value>) -> Result<SplitSurface> {
    let base = match base {
        Some(v) => BaseConfig::from_json(v)?,
        None => BaseConfig::search(config.field()?)?,
    };
    SplitSurface::build(base)
}

fn split_check(config: &RunConfig, s: &SplitSurface, check: &SplitCheck, samples: usize) -> Result<Value> {
    let f = s.field();
    Ok(match check {
        SplitCheck::SelfComposition => {
            let reports = s
                .complement()
                .iter()
                .map(|x| s.theorem_53_check(x))
                .collect::<Result<Vec<_>>>()?;
            let mut generates = 0;
            for x in s.complement() {
                generates += s.single_point_closure(x)?.generated_all as usize;
            }
            json!({
                "passed": reports.iter().all(|r| r.passed),
                "points_passing": reports.iter().filter(|r| r.passed).count(),
                "unexplained_missing": reports.iter().map(|r| r.unexplained).sum::<usize>(),
                "single_point_generators": generates,
                "sweeps": reports,
            })
        }
        SplitCheck::Generation => match s.search_generating_seed(6)? {
            Some((seed, r)) => json!({
                "passed": true,
                "seed": seed.iter().map(|&i| s.complement()[i].to_json(f)).collect::<Vec<_>>(),
                "rounds": r.rounds,
            }),
            None => json!({ "passed": false }),
        },
        SplitCheck::U3Trivial => {
            let r = s.u3_partition()?;
            json!({ "passed": r.class_count() == 1, "class_count": r.class_count() })
        }
        SplitCheck::Elimination => sample_json(s.sample_elimination(samples, config.rng_seed()?)),
        SplitCheck::ExceptionalTriple => sample_json(s.sample_exceptional_triple(samples, config.rng_seed()?)),
        SplitCheck::GroupLaw => sample_json(s.sample_group_law(samples, config.rng_seed()?)),
    })
}

fn sample_json(r: crate::split::SampleReport) -> Value {
    let mut v = serde_json::to_value(&r).expect("report serializes");
    v["passed"] = Value::Bool(r.passed());
    v
}

/// Histogram of rational point counts of smooth forms over F_2.
pub fn f2_point_histogram() -> BTreeMap<usize, usize> {
    let counts: Vec<usize> = (1u32..1 << 20)
        .into_par_iter()
        .filter_map(|m| corpus::f2_form(m).filter(|c| c.is_smooth()))
        .map(|c| c.points().len())
        .collect();
    let mut h = BTreeMap::new();
    for n in counts {
        *h.entry(n).or_insert(0) += 1;
    }
    h
}

/// Parses `"3,0,1"` into a word; `""` and `"-"` are the empty word.
pub fn parse_word(s: &str) -> Result<Word> {
    if s.is_empty() || s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad letter {t:?}")))
        })
        .collect()
}

/// Parses `"p,e"` or `"q"`.
pub fn parse_field(s: &str) -> Result<FieldSpec> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| Error::InvalidInput(format!("bad field {s:?}")))
    };
    match parts[..] {
        [q] => FieldSpec::with_order(num(q)?),
        [p, e] => FieldSpec::new(num(p)?, num(e)?),
        _ => Err(Error::InvalidInput(format!("bad field {s:?}"))),
    }
}

/// Distinct indices parsed from `"0,2,5"`.
pub fn parse_points(s: &str) -> Result<BTreeSet<usize>> {
    Ok(parse_word(s)?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::new(2, 1).unwrap()
    }

    fn on_corpus(command: Command, name: &str) -> RunConfig {
        RunConfig {
            field: Some(f2()),
            input: Some(Input::Corpus { name: name.into() }),
            ..RunConfig::new(command)
        }
    }

    #[test]
    fn relator_word_has_empty_normal_form() {
        let cfg = on_corpus(
            Command::Word {
                op: WordOp::Nf,
                words: vec![vec![0, 1, 2, 0, 1, 2]],
                letter: None,
            },
            "fermat-curve",
        );
        let r = run(&cfg).unwrap();
        assert_eq!(r.results["word"], json!([]));
        assert!(r.verify_hash());
    }

    #[test]
    fn distinct_closure_of_one_point() {
        let cfg = on_corpus(
            Command::Generate {
                rule: Rule::DistinctOnly,
                points: vec![1],
            },
            "fermat-surface",
        );
        assert_eq!(run(&cfg).unwrap().results["reached"], json!([1]));
    }

    #[test]
    fn universal_on_fermat() {
        let cfg = on_corpus(Command::Equivalence { kind: EquivKind::Universal }, "fermat-surface");
        let r = run(&cfg).unwrap();
        assert!(r.results["partition"]["class_count"].as_u64().unwrap() >= 1);
    }

    #[test]
    fn errors_and_parsing() {
        let cfg = RunConfig::new(Command::Collinearity);
        assert!(matches!(run(&cfg), Err(Error::InvalidInput(_))));
        let mut cfg = on_corpus(Command::Collinearity, "nope");
        assert!(run(&cfg).is_err());
        cfg.input = Some(Input::Corpus { name: "f2:0".into() });
        assert_eq!(run(&cfg).unwrap_err(), Error::ZeroForm);
        assert_eq!(parse_word("-").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_word("3, 1").unwrap(), vec![3, 1]);
        assert_eq!(parse_field("2,2").unwrap().q(), 4);
        assert_eq!(parse_field("7").unwrap().q(), 7);
        assert!(parse_field("6").is_err());
        assert_eq!("5.7.6".parse::<SplitCheck>().unwrap(), SplitCheck::Elimination);
        assert_eq!("group_law".parse::<SplitCheck>().unwrap(), SplitCheck::GroupLaw);
    }

    #[test]
    fn sampled_runs_need_a_seed() {
        let cfg = RunConfig {
            field: Some(FieldSpec::with_order(4).unwrap()),
            ..RunConfig::new(Command::EnumerateSurfaces {
                mode: EnumMode::Sampled { samples: 3 },
                filter: SurfaceFilter::default(),
                limit: 1,
            })
        };
        assert!(matches!(run(&cfg), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn hash_tracks_config() {
        let a = on_corpus(Command::Collinearity, "fermat-curve");
        let mut b = a.clone();
        b.seed = Some(1);
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash(), a.clone().hash());
    }
}
