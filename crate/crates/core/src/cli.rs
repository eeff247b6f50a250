//! Problem files, result documents and the three commands behind `galdesc`.
//!
//! Both file kinds are TOML. A problem file has `[field]`, `[galois]`,
//! `[variety]`, one `[datum.<label>]` per non-identity automorphism and an
//! optional `[options]` table. A result document has `[Y]`, `[map]`,
//! `[inverse]` and `[certificates]`.

use std::sync::Arc;

use toml::{Table, Value};

use crate::descent::{
    compare_models, descend, verify_datum, verify_model, AffineVariety, DescentDatum, DescentOptions,
    DescentResult, Model, Report,
};
use crate::error::{Error, Result};
use crate::groebner::{Budget, Ideal};
use crate::multipoly::{parse_element, parse_poly, parse_univariate, Fraction, MonomialOrder, PolyRing, RationalMap};
use crate::numberfield::{GaloisGroup, NumberField};

/// Environment variable holding the default reduction budget.
pub const BUDGET_ENV: &str = "GALDESCENT_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// What a command prints and how it exits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(err: &Error, stdout: String) -> Self {
        Outcome {
            code: exit_code(err),
            stdout,
            stderr: format!("error: {err}\n"),
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_resource_limit() {
        EXIT_RESOURCE
    } else if err.is_verification_failure() {
        EXIT_VERIFICATION
    } else {
        EXIT_INPUT
    }
}

/// Settings from the `[options]` table; unset entries fall back to the
/// command line or the defaults.
#[derive(Clone, Debug, Default)]
pub struct FileOptions {
    pub order: Option<MonomialOrder>,
    pub budget: Option<u64>,
    pub prune: Option<bool>,
    pub inverse: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub datum: DescentDatum,
    pub options: FileOptions,
}

/// Flags given on the command line.
#[derive(Clone, Debug, Default)]
pub struct CommandOptions {
    pub prune: bool,
    pub no_inverse: bool,
    pub order: Option<MonomialOrder>,
    pub budget: Option<u64>,
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn located(place: &str, err: Error) -> Error {
    match err {
        Error::Syntax { .. } | Error::UnknownVariable { .. } => input(format!("{place}: {err}")),
        e => e,
    }
}

fn table<'a>(doc: &'a Table, key: &str) -> Result<&'a Table> {
    doc.get(key)
        .ok_or_else(|| input(format!("missing [{key}] section")))?
        .as_table()
        .ok_or_else(|| input(format!("[{key}] must be a table")))
}

fn string<'a>(t: &'a Table, key: &str, place: &str) -> Result<&'a str> {
    t.get(key)
        .ok_or_else(|| input(format!("{place}: missing `{key}`")))?
        .as_str()
        .ok_or_else(|| input(format!("{place}.{key} must be a string")))
}

fn strings(t: &Table, key: &str, place: &str) -> Result<Vec<String>> {
    let arr = t
        .get(key)
        .ok_or_else(|| input(format!("{place}: missing `{key}`")))?
        .as_array()
        .ok_or_else(|| input(format!("{place}.{key} must be an array")))?;
    arr.iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| input(format!("{place}.{key} must contain strings")))
        })
        .collect()
}

fn check_keys(t: &Table, allowed: &[&str], place: &str) -> Result<()> {
    match t.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(input(format!("{place}: unknown key `{k}`"))),
        None => Ok(()),
    }
}

pub fn parse_order(text: &str) -> Result<MonomialOrder> {
    match text {
        "lex" => Ok(MonomialOrder::Lex),
        "grevlex" => Ok(MonomialOrder::GrevLex),
        other => Err(input(format!("unknown monomial order `{other}` (expected lex or grevlex)"))),
    }
}

fn order_name(order: &MonomialOrder) -> &'static str {
    match order {
        MonomialOrder::Lex => "lex",
        _ => "grevlex",
    }
}

fn parse_doc(text: &str, what: &str) -> Result<Table> {
    text.parse::<Table>().map_err(|e| input(format!("{what}: {}", e.to_string().trim_end())))
}

fn ring(field: &Arc<NumberField>, vars: Vec<String>, place: &str) -> Result<Arc<PolyRing>> {
    for (k, v) in vars.iter().enumerate() {
        let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || v == field.generator_name() {
            return Err(input(format!("{place}: invalid variable name `{v}`")));
        }
        if vars[..k].contains(v) {
            return Err(input(format!("{place}: duplicate variable `{v}`")));
        }
    }
    Ok(PolyRing::new(field.clone(), vars, MonomialOrder::GrevLex))
}

/// A component given as "expr" or ["num", "den"].
fn fraction(value: &Value, ring: &Arc<PolyRing>, place: &str) -> Result<Fraction> {
    let poly = |text: &str, part: &str| parse_poly(text, ring).map_err(|e| located(&format!("{place}{part}"), e));
    match value {
        Value::String(s) => Ok(Fraction::poly(poly(s, "")?)),
        Value::Array(a) if a.len() == 2 => {
            let (Some(n), Some(d)) = (a[0].as_str(), a[1].as_str()) else {
                return Err(input(format!("{place} must be a string or a pair of strings")));
            };
            Fraction::new(poly(n, " numerator")?, poly(d, " denominator")?)
        }
        _ => Err(input(format!("{place} must be a string or a pair of strings"))),
    }
}

/// Reads a `[name]` table of components keyed by the target variables.
fn map_table(t: &Table, source: &Arc<PolyRing>, target: &Arc<PolyRing>, name: &str) -> Result<RationalMap> {
    check_keys(t, &target.vars().iter().map(String::as_str).collect::<Vec<_>>(), &format!("[{name}]"))?;
    let comps = target
        .vars()
        .iter()
        .map(|v| {
            let value = t
                .get(v)
                .ok_or_else(|| input(format!("[{name}]: missing component for `{v}`")))?;
            fraction(value, source, &format!("{name}.{v}"))
        })
        .collect::<Result<Vec<_>>>()?;
    RationalMap::new(source.clone(), target.clone(), comps)
}

fn read_options(doc: &Table) -> Result<FileOptions> {
    let mut out = FileOptions::default();
    let Some(v) = doc.get("options") else {
        return Ok(out);
    };
    let t = v.as_table().ok_or_else(|| input("[options] must be a table"))?;
    check_keys(t, &["order", "budget", "prune", "inverse"], "[options]")?;
    if let Some(v) = t.get("order") {
        out.order = Some(parse_order(v.as_str().ok_or_else(|| input("options.order must be a string"))?)?);
    }
    if let Some(v) = t.get("budget") {
        let n = v.as_integer().filter(|n| *n > 0).ok_or_else(|| input("options.budget must be a positive integer"))?;
        out.budget = Some(n as u64);
    }
    for (key, slot) in [("prune", &mut out.prune), ("inverse", &mut out.inverse)] {
        if let Some(v) = t.get(key) {
            *slot = Some(v.as_bool().ok_or_else(|| input(format!("options.{key} must be true or false")))?);
        }
    }
    Ok(out)
}

/// Parses a problem file; the variety is checked to be nonempty under
/// `budget`.
pub fn parse_problem(text: &str, budget: &Budget) -> Result<Problem> {
    let doc = parse_doc(text, "problem file")?;
    check_keys(&doc, &["field", "galois", "variety", "datum", "options"], "problem file")?;

    let f = table(&doc, "field")?;
    check_keys(f, &["generator", "minpoly"], "[field]")?;
    let generator = string(f, "generator", "[field]")?;
    let minpoly = parse_univariate(string(f, "minpoly", "[field]")?, generator).map_err(|e| located("field.minpoly", e))?;
    let field = NumberField::new(minpoly, generator)?;

    let g = table(&doc, "galois")?;
    let mut labels = Vec::new();
    let mut images = Vec::new();
    for (label, v) in g {
        let text = v.as_str().ok_or_else(|| input(format!("galois.{label} must be a string")))?;
        labels.push(label.clone());
        images.push(parse_element(text, &field).map_err(|e| located(&format!("galois.{label}"), e))?);
    }
    let group = GaloisGroup::new(field.clone(), labels, images)?;

    let v = table(&doc, "variety")?;
    check_keys(v, &["variables", "equations"], "[variety]")?;
    let x_ring = ring(&field, strings(v, "variables", "[variety]")?, "[variety]")?;
    let eqs = strings(v, "equations", "[variety]")?
        .iter()
        .enumerate()
        .map(|(k, e)| parse_poly(e, &x_ring).map_err(|err| located(&format!("variety.equations[{}]", k + 1), err)))
        .collect::<Result<Vec<_>>>()?;
    let variety = AffineVariety::new(&x_ring, eqs, budget)?;

    let mut maps = Vec::new();
    if let Some(d) = doc.get("datum") {
        let d = d.as_table().ok_or_else(|| input("[datum] must contain one table per automorphism"))?;
        for (label, t) in d {
            let s = group
                .index_of(label)
                .ok_or_else(|| input(format!("[datum.{label}]: no automorphism with that label")))?;
            let t = t.as_table().ok_or_else(|| input(format!("[datum.{label}] must be a table")))?;
            maps.push((s, map_table(t, &x_ring, &x_ring, &format!("datum.{label}"))?));
        }
    }
    let datum = DescentDatum::new(variety, group, maps)?;
    Ok(Problem {
        datum,
        options: read_options(&doc)?,
    })
}

/// Budget precedence: command line, then `[options]`, then the
/// environment, then the built-in default.
fn resolve_budget(cli: Option<u64>, file: Option<u64>) -> Result<Budget> {
    if let Some(n) = cli.or(file) {
        return Ok(Budget::with_reductions(n));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|n| *n > 0)
            .map(Budget::with_reductions)
            .ok_or_else(|| input(format!("{BUDGET_ENV} must be a positive integer"))),
        Err(_) => Ok(Budget::default()),
    }
}

fn load(text: &str, cli: &CommandOptions) -> Result<(Problem, DescentOptions)> {
    let file = parse_doc(text, "problem file").and_then(|doc| read_options(&doc))?;
    let budget = resolve_budget(cli.budget, file.budget)?;
    let problem = parse_problem(text, &budget)?;
    let o = &problem.options;
    let options = DescentOptions {
        budget,
        prune: cli.prune || o.prune.unwrap_or(false),
        inverse: !cli.no_inverse && o.inverse.unwrap_or(true),
        order: cli.order.clone().or_else(|| o.order.clone()).unwrap_or(MonomialOrder::GrevLex),
    };
    Ok((problem, options))
}

fn fraction_value(f: &Fraction) -> Value {
    match f.as_poly() {
        Some(p) => Value::String(p.to_string()),
        None => Value::Array(vec![Value::String(f.num.to_string()), Value::String(f.den.to_string())]),
    }
}

fn map_value(f: &RationalMap) -> Value {
    let mut t = Table::new();
    for (v, c) in f.target().vars().iter().zip(f.components()) {
        t.insert(v.clone(), fraction_value(c));
    }
    Value::Table(t)
}

fn string_array<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(items.into_iter().map(|s| Value::String(s.to_string())).collect())
}

/// Serializes a result. I(Y) is written as its reduced Gröbner basis in
/// the result's order.
pub fn result_document(result: &DescentResult, budget: &Budget) -> Result<String> {
    let gb = result.y.groebner(budget)?;
    let mut y = Table::new();
    y.insert("variables".into(), string_array(result.y.ring().vars()));
    y.insert("order".into(), Value::String(order_name(result.y.ring().order()).into()));
    y.insert("equations".into(), string_array(gb.elements()));
    let mut doc = Table::new();
    doc.insert("Y".into(), Value::Table(y));
    doc.insert("map".into(), map_value(&result.map));
    if let Some(inv) = &result.inverse {
        doc.insert("inverse".into(), map_value(inv));
    }
    let mut certs = Table::new();
    for (name, value) in result.certificates.entries() {
        certs.insert(name.into(), Value::Boolean(value));
    }
    certs.insert("birational".into(), Value::String(result.certificates.birational.as_str().into()));
    doc.insert("certificates".into(), Value::Table(certs));
    toml::to_string_pretty(&doc).map_err(|e| input(format!("cannot serialize result: {e}")))
}

/// Reads a claimed model: `[Y]` (variables, equations), `[map]` keyed by
/// the Y variables and an optional `[inverse]` keyed by the X variables.
pub fn parse_model(text: &str, datum: &DescentDatum) -> Result<Model> {
    let doc = parse_doc(text, "claimed document")?;
    let x_ring = datum.variety().ring();
    let y = table(&doc, "Y")?;
    check_keys(y, &["variables", "equations", "order"], "[Y]")?;
    let y_ring = ring(x_ring.field(), strings(y, "variables", "[Y]")?, "[Y]")?;
    let eqs = strings(y, "equations", "[Y]")?
        .iter()
        .enumerate()
        .map(|(k, e)| parse_poly(e, &y_ring).map_err(|err| located(&format!("Y.equations[{}]", k + 1), err)))
        .collect::<Result<Vec<_>>>()?;
    let map = map_table(table(&doc, "map")?, x_ring, &y_ring, "map")?;
    let inverse = match doc.get("inverse") {
        None => None,
        Some(v) => {
            let t = v.as_table().ok_or_else(|| input("[inverse] must be a table"))?;
            Some(map_table(t, &y_ring, x_ring, "inverse")?)
        }
    };
    Ok(Model {
        map,
        y: Ideal::new(&y_ring, eqs),
        inverse,
    })
}

fn report_text(report: &Report) -> String {
    let mut out = String::new();
    for c in &report.checks {
        match (&c.witness, c.passed) {
            (_, true) => out.push_str(&format!("PASS {}\n", c.name)),
            (Some(w), false) => out.push_str(&format!("FAIL {}: witness {}\n", c.name, w)),
            (None, false) => out.push_str(&format!("FAIL {}\n", c.name)),
        }
    }
    out
}

fn report_outcome(report: Report) -> Outcome {
    let text = report_text(&report);
    match report.failure {
        None => Outcome::ok(text),
        Some(e) => Outcome::error(&e, text),
    }
}

/// `verify-datum`: one line per check.
pub fn cmd_verify_datum(problem_text: &str, cli: &CommandOptions) -> Outcome {
    let run = || -> Result<Report> {
        let (problem, options) = load(problem_text, cli)?;
        crate::descent::check_datum(&problem.datum, &options.budget)
    };
    match run() {
        Ok(report) => report_outcome(report),
        Err(e) => Outcome::error(&e, String::new()),
    }
}

/// `descend`: the result document on success.
pub fn cmd_descend(problem_text: &str, cli: &CommandOptions) -> Outcome {
    let run = || -> Result<String> {
        let (problem, options) = load(problem_text, cli)?;
        let result = descend(&problem.datum, &options)?;
        result_document(&result, &options.budget)
    };
    match run() {
        Ok(doc) => Outcome::ok(doc),
        Err(e) => Outcome::error(&e, String::new()),
    }
}

/// `check-model`: verifies the claimed model; with `compare`, also maps a
/// fresh descent result onto it.
pub fn cmd_check_model(problem_text: &str, claimed_text: &str, compare: bool, cli: &CommandOptions) -> Outcome {
    let run = || -> Result<Outcome> {
        let (problem, options) = load(problem_text, cli)?;
        verify_datum(&problem.datum, &options.budget)?;
        let claimed = parse_model(claimed_text, &problem.datum)?;
        let report = verify_model(&problem.datum, &claimed, &options.budget)?;
        if !report.passed() || !compare {
            return Ok(report_outcome(report));
        }
        let mut text = report_text(&report);
        let fresh = descend(&problem.datum, &options)?.model();
        let (from, to) = if fresh.inverse.is_some() {
            (&fresh, &claimed)
        } else {
            (&claimed, &fresh)
        };
        let j = compare_models(from, to, &problem.datum, &options.budget)?;
        text.push_str("PASS compare\n");
        for (v, c) in j.target().vars().iter().zip(j.components()) {
            text.push_str(&format!("  {v} = {c}\n"));
        }
        Ok(Outcome::ok(text))
    };
    match run() {
        Ok(out) => out,
        Err(e) => Outcome::error(&e, String::new()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONIC: &str = r#"
[field]
generator = "i"
minpoly = "i^2 + 1"

[galois]
e = "i"
s = "-i"

[variety]
variables = ["x", "y"]
equations = ["x*y - i"]

[datum.s]
x = "i*y"
y = ["i*x", "1"]
"#;

    fn opts() -> CommandOptions {
        CommandOptions {
            budget: Some(1_000_000),
            ..CommandOptions::default()
        }
    }

    #[test]
    fn problem_parses() {
        let p = parse_problem(CONIC, &Budget::default()).unwrap();
        assert_eq!(p.datum.group().labels(), ["e", "s"]);
        assert_eq!(p.datum.maps()[1].components()[1].to_string(), "i*x");
        assert!(p.options.order.is_none());
    }

    #[test]
    fn missing_datum_is_input_error() {
        let text = CONIC.split("[datum.s]").next().unwrap();
        let out = cmd_verify_datum(text, &opts());
        assert_eq!(out.code, EXIT_INPUT);
        assert!(out.stderr.contains("missing map for s"), "{}", out.stderr);
    }

    #[test]
    fn unknown_variable_is_located() {
        let out = cmd_verify_datum(&CONIC.replace("x*y - i", "x*z - i"), &opts());
        assert_eq!(out.code, EXIT_INPUT);
        assert!(out.stderr.contains("variety.equations[1]"), "{}", out.stderr);
        assert!(out.stderr.contains("column 3"), "{}", out.stderr);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{CONIC}\n[options]\nspeed = 3\n");
        assert_eq!(cmd_descend(&text, &opts()).code, EXIT_INPUT);
    }

    #[test]
    fn reducible_minpoly_is_rejected() {
        let out = cmd_verify_datum(&CONIC.replace("i^2 + 1", "i^2 - 1"), &opts());
        assert_eq!(out.code, EXIT_INPUT);
    }

    #[test]
    fn file_options_apply() {
        let text = format!("{CONIC}\n[options]\norder = \"lex\"\ninverse = false\n");
        let out = cmd_descend(&text, &CommandOptions::default());
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        assert!(out.stdout.contains("order = \"lex\""));
        assert!(!out.stdout.contains("[inverse]"));
        assert!(out.stdout.contains("birational = \"via-projection\""));
    }

    #[test]
    fn file_budget_is_used() {
        let text = format!("{CONIC}\n[options]\nbudget = 5\n");
        assert_eq!(cmd_descend(&text, &CommandOptions::default()).code, EXIT_RESOURCE);
        let out = cmd_descend(&text, &opts());
        assert_eq!(out.code, EXIT_OK);
    }
}
