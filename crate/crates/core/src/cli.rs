//! The `waring` command line.
//!
//! Exit codes: 0 success, 1 typed mathematical failure (a construction that
//! did not apply, a guard that refused an enumeration), 2 usage error.
//! `--json` prints one JSON document; otherwise output is aligned text, or
//! CSV for whole-field oracle reports.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::canonical::{diagonalize_distinct, is_indecomposable, presentation_size, Presentation};
use crate::decomposer::{
    decompose_structured, decompose_three, decompose_two, tables, DecomposeError,
    StructuredOutcome,
};
use crate::field::{gcd, Elem, Field};
use crate::oracle::{self, bn_conjugate, min_waring_with_witness, negative_checks, waring_report};
use crate::power_sums::{
    classify, count_zero_sum_classes, enumerate_pair_solutions, f_zero_characterization,
    lang_weil_check,
};
use crate::tri_matrix::{kth_root_distinct_diag, kth_root_sparse, mat_pow, UTMatrix};

#[derive(Debug, Parser)]
#[command(name = "waring", version, about = "Sums of k-th powers in upper-triangular matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Field parameters, k-th power image, and the f(x,y) zero check.
    Field(FieldArgs),
    /// Solutions of X^k + Y^k = λ.
    Solve(SolveArgs),
    /// Class partition of X^k + Y^k = λ (every λ when --lambda is omitted).
    Classify(ClassifyArgs),
    /// Write a matrix as a sum of two or three k-th powers.
    Decompose(DecomposeArgs),
    /// k-th root of a triangular matrix.
    Root(RootArgs),
    /// Structured two-power split of a presentation (all reference rows when --row is omitted).
    Table(TableArgs),
    /// Brute-force minimum number of k-th powers.
    Oracle(OracleArgs),
    /// Point count of α·X^k = 1 against the Lang-Weil bound.
    Bound(BoundArgs),
    /// Conjugacy under invertible upper-triangular matrices.
    Conjugate(ConjugateArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Field: P, P^M, P^M/c0,...,cM (modulus coefficients), or a prime power.
    #[arg(long)]
    q: String,
    /// Print JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct FieldArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: Option<u64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    lambda: u64,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    lambda: Option<u64>,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    matrix: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    parts: u8,
}

#[derive(Debug, Args)]
struct RootArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    matrix: String,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    row: Option<String>,
    /// Size; defaults to the largest label in --row.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long, default_value_t = 4)]
    cap: u32,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: u64,
    /// Number of variables.
    #[arg(long, default_value_t = 2)]
    m: usize,
}

#[derive(Debug, Args)]
struct ConjugateArgs {
    #[command(flatten)]
    common: Common,
    /// One matrix: diagonalize it. Two: test conjugacy.
    #[arg(long, num_args = 1, required = true)]
    matrix: Vec<String>,
}

/// Outcome of a subcommand before printing.
enum Outcome {
    Ok(Value, String),
    Failure(Value, String),
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl From<crate::field::FieldError> for CliError {
    fn from(e: crate::field::FieldError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::tri_matrix::MatrixError> for CliError {
    fn from(e: crate::tri_matrix::MatrixError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<oracle::OracleError> for CliError {
    fn from(e: oracle::OracleError) -> Self {
        match e {
            oracle::OracleError::Matrix(m) => CliError::Usage(m.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let json = match &cli.command {
        Command::Field(a) => a.common.json,
        Command::Solve(a) => a.common.json,
        Command::Classify(a) => a.common.json,
        Command::Decompose(a) => a.common.json,
        Command::Root(a) => a.common.json,
        Command::Table(a) => a.common.json,
        Command::Oracle(a) => a.common.json,
        Command::Bound(a) => a.common.json,
        Command::Conjugate(a) => a.common.json,
    };
    let result = match cli.command {
        Command::Field(a) => cmd_field(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Root(a) => cmd_root(a),
        Command::Table(a) => cmd_table(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Conjugate(a) => cmd_conjugate(a),
    };
    let (value, text, code) = match result {
        Ok(Outcome::Ok(v, t)) => (v, t, 0),
        Ok(Outcome::Failure(v, t)) => (v, t, 1),
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            if json {
                let _ = writeln!(out, "{}", json!({ "error": msg }));
            }
            return 1;
        }
    };
    let written = if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("values serialize"))
    } else {
        write!(out, "{text}")
    };
    if written.is_err() {
        return 1;
    }
    code
}

fn field(text: &str) -> Result<Field, CliError> {
    Ok(text.parse()?)
}

fn element(f: &Field, v: u64) -> Result<Elem, CliError> {
    Ok(f.element(v)?)
}

fn matrix(f: &Field, text: &str) -> Result<UTMatrix, CliError> {
    Ok(UTMatrix::parse_in(text, f)?)
}

fn positive(k: u64) -> Result<u64, CliError> {
    if k == 0 {
        return Err(CliError::Usage("--k must be positive".into()));
    }
    Ok(k)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_field(a: FieldArgs) -> Result<Outcome, CliError> {
    let f = field(&a.common.q)?;
    let mut v = json!({
        "field": f.to_string(),
        "p": f.characteristic(),
        "m": f.degree(),
        "q": f.order(),
        "modulus": f.modulus(),
    });
    let mut text = format!(
        "field    {}\np        {}\nm        {}\nq        {}\nmodulus  {}\n",
        f,
        f.characteristic(),
        f.degree(),
        f.order(),
        join(f.modulus())
    );
    if let Some(k) = a.k {
        let k = positive(k)?;
        let image = f.kth_power_image(k);
        let minus_one = f.minus_one_is_kth_power(k);
        let hom = f_zero_characterization(&f, k);
        v["k"] = json!(k);
        v["image"] = json!(image);
        v["image_size"] = json!(image.len());
        v["gcd"] = json!(gcd(k, f.order() as u64 - 1));
        v["minus_one_is_kth_power"] = json!(minus_one);
        v["f_zero_characterization"] = json!(hom);
        text += &format!(
            "k        {k}\nimage    {} ({} elements)\n-1 is a k-th power  {minus_one}\nf(x,y)=0 characterization holds  {} ({} zeros)\n",
            join(&image),
            image.len(),
            hom.holds(),
            hom.zeros
        );
        if let Ok(n) = count_zero_sum_classes(&f, k) {
            v["zero_sum_classes"] = json!(n);
            text += &format!("classes of X^k+Y^k=0  {n}\n");
        }
    }
    Ok(Outcome::Ok(v, text))
}

fn cmd_solve(a: SolveArgs) -> Result<Outcome, CliError> {
    let f = field(&a.common.q)?;
    let k = positive(a.k)?;
    let lambda = element(&f, a.lambda)?;
    let sols = enumerate_pair_solutions(&f, lambda, k);
    let cls = crate::power_sums::classify_solutions(&f, &sols);
    let pairs: Vec<[Elem; 2]> = sols.iter().map(|s| [s.x, s.y]).collect();
    let v = json!({
        "q": f.order(),
        "field": f.to_string(),
        "k": k,
        "lambda": lambda,
        "count": sols.len(),
        "solutions": pairs,
        "class_count": cls.class_count(),
        "U_size": cls.u.len(),
    });
    let mut text = format!(
        "X^{k} + Y^{k} = {lambda} over F_{}: {} solutions, {} classes\n",
        f.order(),
        sols.len(),
        cls.class_count()
    );
    for s in &sols {
        text += &format!("{:>6} {:>6}\n", s.x, s.y);
    }
    Ok(Outcome::Ok(v, text))
}

fn class_text(rep: &crate::power_sums::ClassReport) -> String {
    let mut text = format!(
        "lambda {}: {} solutions, U size {}, {} classes\n",
        rep.lambda, rep.solutions, rep.u_size, rep.class_count
    );
    text += &format!("  {:>12}  {:>5}  {:>12}\n", "signature", "size", "rep");
    for c in &rep.classes {
        text += &format!(
            "  {:>12}  {:>5}  {:>12}\n",
            format!("({},{})", c.sig[0], c.sig[1]),
            c.size,
            format!("({},{})", c.rep[0], c.rep[1])
        );
    }
    text
}

fn cmd_classify(a: ClassifyArgs) -> Result<Outcome, CliError> {
    let f = field(&a.common.q)?;
    let k = positive(a.k)?;
    let lambdas: Vec<Elem> = match a.lambda {
        Some(l) => vec![element(&f, l)?],
        None => f.elements().collect(),
    };
    let reports: Vec<_> =
        lambdas.iter().map(|&l| classify(&f, l, k).report(f.order(), k, l)).collect();
    let text: String = reports.iter().map(class_text).collect();
    let v = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
    Ok(Outcome::Ok(v, text))
}

fn decomposition_text(res: &crate::decomposer::DecompositionResult) -> String {
    let names = ["A", "B", "D"];
    let mut text = format!("target    {}\nk         {}\nmode      {}\n", res.target, res.k,
        serde_json::to_value(res.mode).ok().and_then(|m| m.as_str().map(String::from)).unwrap_or_default());
    for (name, p) in names.iter().zip(&res.parts) {
        text += &format!("{name}         {p}\n");
    }
    text += &format!("verified  {}\n", res.verified);
    text
}

fn failure(target: &UTMatrix, k: u64, e: &DecomposeError) -> Outcome {
    let v = json!({
        "target": target,
        "k": k,
        "parts": [],
        "assignment": [],
        "verified": false,
        "failure": e.to_json(),
    });
    Outcome::Failure(v, format!("target    {target}\nfailure   {e}\n"))
}

fn cmd_decompose(a: DecomposeArgs) -> Result<Outcome, CliError> {
    let f = field(&a.common.q)?;
    let k = positive(a.k)?;
    let c = matrix(&f, &a.matrix)?;
    let res = if a.parts == 2 { decompose_two(&f, &c, k) } else { decompose_three(&f, &c, k) };
    Ok(match res {
        Ok(r) => Outcome::Ok(r.to_json(), decomposition_text(&r)),
        Err(e) => failure(&c, k, &e),
    })
}

fn cmd_root(a: RootArgs) -> Result<Outcome, CliError> {
    let f = field(&a.common.q)?;
    let k = positive(a.k)?;
    let c = matrix(&f, &a.matrix)?;
    let attempt = kth_root_distinct_diag(&f, &c, k)
        .map(|r| (r, "distinct_diagonal"))
        .or_else(|_| kth_root_sparse(&f, &c, k).map(|r| (r, "sparse")));
    Ok(match attempt {
        Ok((root, method)) => {
            let verified = mat_pow(&f, &root, k) == c;
            let v = json!({ "target": c, "k": k, "root": root, "method": method, "verified": verified });
            let text = format!("target    {c}\nroot      {root}\nmethod    {method}\nverified  {verified}\n");
            Outcome::Ok(v, text)
        }
        Err(e) => {
            let v = json!({ "target": c, "k": k, "failure": e.to_string() });
            Outcome::Failure(v, format!("target    {c}\nfailure   {e}\n"))
        }
    })
}

fn table_row(f: &Field, k: u64, text: &str, n: usize) -> Result<(Value, String, bool), CliError> {
    let p = Presentation::parse(text, n).map_err(|e| CliError::Usage(e.to_string()))?;
    let c = p.to_matrix();
    let connected = is_indecomposable(&c).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut v = json!({ "row": text, "n": n, "matrix": c, "indecomposable": connected });
    let mut out = format!("row       {text}\nmatrix    {c}\nconnected {connected}\n");
    let ok = match decompose_structured(f, &c, k) {
        Ok(StructuredOutcome::Decomposed { result, plan }) => {
            let a_pow = mat_pow(f, &result.parts[0], k);
            let b_pow = mat_pow(f, &result.parts[1], k);
            out += &format!(
                "coloring  {}\nA^k       {a_pow}\nB^k       {b_pow}\nA         {}\nB         {}\nverified  {}\n",
                join(&plan.coloring),
                result.parts[0],
                result.parts[1],
                result.verified
            );
            v["plan"] = plan.to_json();
            v["powers"] = json!([a_pow, b_pow]);
            v["result"] = result.to_json();
            result.verified
        }
        Ok(StructuredOutcome::Obstruction(ob)) => {
            out += &format!(
                "obstruction: {} colorings refuted, {} cases explored\n",
                ob.refuted.len(),
                ob.explored
            );
            v["obstruction"] = json!(ob);
            false
        }
        Err(e) => {
            out += &format!("failure   {e}\n");
            v["failure"] = e.to_json();
            false
        }
    };
    Ok((v, out, ok))
}

fn cmd_table(a: TableArgs) -> Result<Outcome, CliError> {
    let f = field(&a.common.q)?;
    let k = positive(a.k)?;
    match a.row {
        Some(row) => {
            let n = match a.n.or_else(|| presentation_size(&row)) {
                Some(n) => n,
                None => return Err(CliError::Usage("cannot infer --n from --row".into())),
            };
            let (v, text, ok) = table_row(&f, k, &row, n)?;
            Ok(if ok { Outcome::Ok(v, text) } else { Outcome::Failure(v, text) })
        }
        None => {
            let mut all = Vec::new();
            let mut text = String::new();
            let mut all_ok = true;
            for row in &tables::REFERENCE_ROWS {
                let (v, t, ok) = table_row(&f, k, row.presentation, tables::row_size(row))?;
                all_ok &= ok;
                all.push(v);
                text += &t;
                text.push('\n');
            }
            let v = json!(all);
            Ok(if all_ok { Outcome::Ok(v, text) } else { Outcome::Failure(v, text) })
        }
    }
}

fn cmd_oracle(a: OracleArgs) -> Result<Outcome, CliError> {
    let f = field(&a.common.q)?;
    let k = positive(a.k)?;
    if let Some(text) = &a.matrix {
        let c = matrix(&f, text)?;
        let (min, parts) = min_waring_with_witness(&f, &c, k, a.cap)?;
        let parts = parts.unwrap_or_default();
        let v = json!({ "field": f.to_string(), "k": k, "target": c, "cap": a.cap, "min": min, "parts": parts });
        let mut out = format!("target  {c}\nmin     {min}\n");
        for p in &parts {
            out += &format!("part    {p}\n");
        }
        return Ok(Outcome::Ok(v, out));
    }
    if let Some(n) = a.n {
        let rep = waring_report(&f, n, k, a.cap)?;
        let csv = rep.to_csv(f.order());
        return Ok(Outcome::Ok(json!(rep), csv));
    }
    let rep = negative_checks(&f, k)?;
    let mut text = String::new();
    for c in &rep.checks {
        let status = match c.holds {
            Some(true) => "holds",
            Some(false) => "REFUTED",
            None => "skipped",
        };
        text += &format!("{:<28} {:<8} {}\n", c.name, status, c.detail);
    }
    let ok = rep.all_hold();
    let v = json!(rep);
    Ok(if ok { Outcome::Ok(v, text) } else { Outcome::Failure(v, text) })
}

fn cmd_bound(a: BoundArgs) -> Result<Outcome, CliError> {
    let f = field(&a.common.q)?;
    let k = positive(a.k)?;
    let rep = lang_weil_check(&f, k, &vec![Elem::ONE; a.m]).map_err(|e| match e {
        crate::power_sums::SolveError::EnumerationTooLarge { .. } => CliError::Domain(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;
    let text = format!(
        "N         {}\nq^(m-1)   {}\n|diff|    {}\nbound     {:.3}\nok        {}\n",
        rep.count, rep.expected, rep.deviation, rep.bound, rep.ok
    );
    let ok = rep.ok;
    let v = json!(rep);
    Ok(if ok { Outcome::Ok(v, text) } else { Outcome::Failure(v, text) })
}

fn cmd_conjugate(a: ConjugateArgs) -> Result<Outcome, CliError> {
    let f = field(&a.common.q)?;
    match a.matrix.as_slice() {
        [one] => {
            let m = matrix(&f, one)?;
            match diagonalize_distinct(&f, &m) {
                Ok((d, w)) => {
                    let text = format!("before  {}\nS       {}\nafter   {d}\n", w.before, w.s);
                    Ok(Outcome::Ok(json!({ "diagonal": d, "witness": w }), text))
                }
                Err(e) => Ok(Outcome::Failure(
                    json!({ "matrix": m, "failure": e.to_string() }),
                    format!("failure  {e}\n"),
                )),
            }
        }
        [x, y] => {
            let (ma, mb) = (matrix(&f, x)?, matrix(&f, y)?);
            let w = bn_conjugate(&f, &ma, &mb)?;
            let text = match &w {
                Some(w) => format!("conjugate  true\nS          {}\n", w.s),
                None => "conjugate  false\n".to_string(),
            };
            Ok(Outcome::Ok(json!({ "conjugate": w.is_some(), "witness": w }), text))
        }
        _ => Err(CliError::Usage("give one --matrix to diagonalize or two to compare".into())),
    }
}
