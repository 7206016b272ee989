use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hallring::acceptance;
use hallring::coeff::LaurentPoly;
use hallring::config::{parse_csv, Format, JobConfig, QList, QuiverSpec};
use hallring::error::HallError;
use hallring::flag::{self, FlagType};
use hallring::gkm;
use hallring::hall::{interpolate_word, HallAlgebra};
use hallring::quiver::{DimVector, FreeRep, Quiver};
use hallring::render;
use hallring::ring::RMatrix;

#[derive(Parser, Debug)]
#[command(name = "hallring", version, about = "Hall algebras of free quiver representations over F_q[t]/(t^n)")]
struct Cli {
    /// JSON job configuration; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Preset name (a2, a3, two-points) or path to a JSON quiver.
    #[arg(long, global = true)]
    quiver: Option<String>,
    /// Comma-separated primes.
    #[arg(long, global = true)]
    q: Option<String>,
    /// Nilpotency order: R = F_q[t]/(t^n)
    #[arg(long, global = true)]
    n: Option<u32>,
    /// half (v^(n<a,b>)) or integer (q^(n<a,b>))
    #[arg(long, global = true)]
    twist: Option<String>,
    /// Dimension vector, e.g. 1,1.
    #[arg(long, global = true)]
    dim: Option<String>,
    /// Word of vertex labels, e.g. 1,2,1.
    #[arg(long, global = true)]
    word: Option<String>,
    /// text or json
    #[arg(long, global = true)]
    format: Option<String>,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on enumerated objects per step
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Isomorphism classes at a dimension vector.
    Classify,
    /// Twisted product of the simples in --word.
    Product,
    /// Compare Delta(MN) with Delta(M)Delta(N).
    DeltaCheck,
    /// Serre residual S_i^2 S_j - c S_i S_j S_i + S_j S_i^2 for --word i,j.
    Serre {
        /// Laurent polynomial in v.
        #[arg(long, default_value = "v + v^-1")]
        coeff: String,
    },
    /// Whether S_i S_j = S_j S_i for --word i,j.
    Commute,
    /// Dimension data of a flag type.
    Geom {
        /// Steps as vertex:rank pairs, e.g. 1:1,2:1.
        #[arg(long)]
        flag: String,
        /// Split the flag after this many steps to report d1, d2 and the shifts.
        #[arg(long)]
        split: Option<usize>,
    },
    /// Number of free rank-s summands of R^l for --dim s,l.
    Grassmann,
    /// Product coefficients as Laurent polynomials, interpolated across --q.
    Interpolate,
    /// Run the acceptance suite.
    Accept,
}

struct Job {
    cfg: JobConfig,
    quiver: Quiver,
    dim: Option<String>,
    word: Option<String>,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> (u8, String) {
    (code, msg.to_string())
}

fn error_code(e: &HallError) -> u8 {
    match e {
        HallError::BudgetExceeded { .. } => 3,
        HallError::Interpolation(_) | HallError::Parity(_) => 4,
        _ => 2,
    }
}

fn from_err(e: HallError) -> (u8, String) {
    fail(error_code(&e), e)
}

fn build_job(cli: &Cli) -> Result<Job, (u8, String)> {
    let mut cfg = match &cli.config {
        Some(p) => JobConfig::load(p).map_err(from_err)?,
        None => JobConfig::default(),
    };
    if let Some(qv) = &cli.quiver {
        cfg.quiver = QuiverSpec::from_arg(qv).map_err(from_err)?;
    }
    if let Some(q) = &cli.q {
        cfg.q = QList::Many(parse_csv(q).map_err(from_err)?);
    }
    if let Some(n) = cli.n {
        cfg.n = n;
    }
    if let Some(t) = &cli.twist {
        cfg.twist = t.parse().map_err(from_err)?;
    }
    if let Some(f) = &cli.format {
        cfg.format = match f.as_str() {
            "text" => Format::Text,
            "json" => Format::Json,
            _ => return Err(fail(2, format!("unknown format `{f}` (expected text or json)"))),
        };
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    let quiver = cfg.validate().map_err(from_err)?;
    Ok(Job { cfg, quiver, dim: cli.dim.clone(), word: cli.word.clone() })
}

impl Job {
    fn algebras(&self) -> Result<Vec<HallAlgebra>, (u8, String)> {
        self.cfg
            .q
            .values()
            .into_iter()
            .map(|q| HallAlgebra::with(q, self.cfg.n, self.quiver.clone(), self.cfg.twist, self.cfg.budget))
            .collect::<Result<_, _>>()
            .map_err(from_err)
    }

    fn dim(&self) -> Result<DimVector, (u8, String)> {
        let raw = self.dim.as_deref().ok_or_else(|| fail(2, "--dim is required"))?;
        let d = DimVector(parse_csv(raw).map_err(from_err)?);
        if d.len() != self.quiver.vertex_count() {
            return Err(fail(2, format!("--dim {raw} does not match {} vertices", self.quiver.vertex_count())));
        }
        Ok(d)
    }

    fn word(&self) -> Result<Vec<usize>, (u8, String)> {
        let raw = self.word.as_deref().unwrap_or("");
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|l| self.quiver.vertex_index(l).map_err(from_err))
            .collect()
    }

    fn pair(&self) -> Result<(usize, usize), (u8, String)> {
        let w = if self.word.is_some() {
            self.word()?
        } else if let Some(&(s, t)) = self.quiver.arrows().first() {
            vec![s, t]
        } else {
            vec![0, 1]
        };
        match w.as_slice() {
            [i, j] => Ok((*i, *j)),
            _ => Err(fail(2, "expected --word with exactly two vertices")),
        }
    }

    fn header(&self, q: u32) -> String {
        let arrows: Vec<String> = self
            .quiver
            .arrows()
            .iter()
            .map(|&(s, t)| format!("{}->{}", self.quiver.vertices()[s], self.quiver.vertices()[t]))
            .collect();
        format!(
            "# q = {q}, n = {}, twist = {}, vertices {}, arrows {}\n",
            self.cfg.n,
            self.cfg.twist,
            self.quiver.vertices().join(","),
            if arrows.is_empty() { "none".to_string() } else { arrows.join(",") }
        )
    }

    fn json(&self) -> bool {
        self.cfg.format == Format::Json
    }
}

/// Rendered output plus the exit status.
type Outcome = Result<(String, u8), (u8, String)>;

fn emit_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn classify(job: &Job) -> Outcome {
    let dim = job.dim()?;
    let mut text = String::new();
    let mut sections = Vec::new();
    for h in job.algebras()? {
        let cat = h.category();
        let classes = h.iso_classes(&dim).map_err(from_err)?;
        let mut rows = Vec::new();
        let mut items = Vec::new();
        for (k, x) in classes.iter().enumerate() {
            let aut = h.aut(x).map_err(from_err)?;
            rows.push(vec![k.to_string(), cat.format_rep(x), aut.to_string()]);
            items.push(json!({ "rep": render::rep_json(cat, x), "aut": aut.to_string() }));
        }
        text.push_str(&job.header(h.q()));
        text.push_str(&format!("{} classes at {dim}\n", classes.len()));
        text.push_str(&render::table(&["#", "representative", "|Aut|"], &rows));
        sections.push(json!({ "q": h.q(), "n": h.n(), "dim": dim, "classes": items }));
    }
    Ok((if job.json() { emit_json(&json!(sections)) } else { text }, 0))
}

fn product(job: &Job) -> Outcome {
    let word = job.word()?;
    let mut text = String::new();
    let mut sections = Vec::new();
    for h in job.algebras()? {
        let e = h.word_product(&word).map_err(from_err)?;
        text.push_str(&job.header(h.q()));
        text.push_str(&render::hall_element_table(h.category(), &e));
        sections.push(serde_json::to_value(render::hall_element_json(h.category(), &e)).expect("serializable"));
    }
    Ok((if job.json() { emit_json(&json!(sections)) } else { text }, 0))
}

/// Every arrow acting by `t` on rank-one spaces.
fn all_t_rep(h: &HallAlgebra) -> Result<FreeRep, HallError> {
    let cat = h.category();
    let k = cat.quiver().vertex_count();
    let maps = cat
        .quiver()
        .arrows()
        .iter()
        .map(|_| RMatrix::from_entries(1, 1, vec![cat.ring().t_pow(1)]))
        .collect::<Result<Vec<_>, _>>()?;
    cat.canonical_form(&cat.rep(DimVector(vec![1; k]), maps)?)
}

fn delta_check(job: &Job) -> Outcome {
    let mut text = String::new();
    let mut sections = Vec::new();
    for h in job.algebras()? {
        let cat = h.category();
        let (factor, report) = if job.word.is_some() {
            let e = h.word_product(&job.word()?).map_err(from_err)?;
            let r = h.check_delta_homomorphism_elements(&e, &e).map_err(from_err)?;
            (format!("word {}", job.word.as_deref().unwrap_or("")), r)
        } else {
            let m = all_t_rep(&h).map_err(from_err)?;
            let r = h.check_delta_homomorphism(&m, &m).map_err(from_err)?;
            (cat.format_rep(&m), r)
        };
        let verdict = if report.homomorphism { "homomorphism" } else { "NOT homomorphism" };
        let keys = |s: &std::collections::BTreeSet<(FreeRep, FreeRep)>| -> Vec<String> {
            s.iter()
                .map(|(m, n)| format!("{} {} (x) {} {}", m.dim, cat.format_rep(m), n.dim, cat.format_rep(n)))
                .collect()
        };
        text.push_str(&job.header(h.q()));
        text.push_str(&format!("M = N = {factor}\n"));
        text.push_str(&format!("verdict: {verdict}\n"));
        text.push_str(&format!(
            "support sizes: lhs {}, rhs {}; coefficient mismatches {}\n",
            report.lhs_support.len(),
            report.rhs_support.len(),
            report.coefficient_mismatches.len()
        ));
        for k in keys(&report.lhs_only) {
            text.push_str(&format!("only in Delta(MN): {k}\n"));
        }
        for k in keys(&report.rhs_only) {
            text.push_str(&format!("only in Delta(M)Delta(N): {k}\n"));
        }
        sections.push(json!({
            "q": h.q(),
            "n": h.n(),
            "factor": factor,
            "homomorphism": report.homomorphism,
            "lhs_support": report.lhs_support.len(),
            "rhs_support": report.rhs_support.len(),
            "lhs_only": keys(&report.lhs_only),
            "rhs_only": keys(&report.rhs_only),
            "coefficient_mismatches": keys(&report.coefficient_mismatches),
        }));
    }
    Ok((if job.json() { emit_json(&json!(sections)) } else { text }, 0))
}

fn serre(job: &Job, coeff: &str) -> Outcome {
    let c: LaurentPoly = coeff.parse().map_err(from_err)?;
    let (i, j) = job.pair()?;
    let mut text = String::new();
    let mut sections = Vec::new();
    for h in job.algebras()? {
        let r = gkm::serre_residual(&h, i, j, &c).map_err(from_err)?;
        text.push_str(&job.header(h.q()));
        text.push_str(&format!(
            "coefficient {c}; residual {}\n",
            if r.is_zero() { "zero" } else { "nonzero" }
        ));
        text.push_str(&render::hall_element_table(h.category(), &r));
        sections.push(json!({
            "q": h.q(),
            "n": h.n(),
            "coefficient": c,
            "zero": r.is_zero(),
            "residual": render::hall_element_json(h.category(), &r),
        }));
    }
    Ok((if job.json() { emit_json(&json!(sections)) } else { text }, 0))
}

fn commute(job: &Job) -> Outcome {
    let (i, j) = job.pair()?;
    let names = job.quiver.vertices();
    let mut text = String::new();
    let mut sections = Vec::new();
    let mut all = true;
    for h in job.algebras()? {
        let ok = gkm::commutation_check(&h, i, j).map_err(from_err)?;
        all &= ok;
        text.push_str(&job.header(h.q()));
        text.push_str(&format!("S_{0} S_{1} = S_{1} S_{0}: {ok}\n", names[i], names[j]));
        sections.push(json!({ "q": h.q(), "n": h.n(), "commute": ok }));
    }
    let out = if job.json() { emit_json(&json!(sections)) } else { text };
    Ok((out, if all { 0 } else { 1 }))
}

fn parse_flag(job: &Job, raw: &str) -> Result<FlagType, (u8, String)> {
    let steps = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (v, k) = s.split_once(':').ok_or_else(|| fail(2, format!("flag step `{s}` is not vertex:rank")))?;
            let i = job.quiver.vertex_index(v).map_err(from_err)?;
            let k: u32 = k.parse().map_err(|_| fail(2, format!("bad rank in `{s}`")))?;
            Ok((i, k))
        })
        .collect::<Result<Vec<_>, _>>()?;
    FlagType::new(&job.quiver, steps).map_err(from_err)
}

fn geom(job: &Job, raw: &str, split: Option<usize>) -> Outcome {
    let ft = parse_flag(job, raw)?;
    let q = &job.quiver;
    let n = job.cfg.n;
    let names = q.vertices();
    let mut rows: Vec<(String, i64)> = Vec::new();
    for (i, v) in names.iter().enumerate() {
        rows.push((format!("N_{v}"), flag::n_vertex(&ft, i)));
    }
    for &(s, t) in q.arrows() {
        rows.push((format!("N_{}->{}", names[s], names[t]), flag::n_arrow(&ft, (s, t))));
    }
    let d = flag::flag_dims(&ft, q, n);
    rows.push(("flag_dim".into(), d.flag_dim));
    rows.push(("bundle_rank".into(), d.bundle_rank));
    rows.push(("total_dim".into(), d.total_dim));
    rows.push(("fibre_rank".into(), d.fibre_rank));
    rows.push(("perverse_shift".into(), d.perverse_shift));
    let mut extra = json!({});
    if let Some(k) = split {
        if k > ft.0.len() {
            return Err(fail(2, format!("--split {k} exceeds the flag length {}", ft.0.len())));
        }
        let ft1 = FlagType(ft.0[..k].to_vec());
        let ft2 = FlagType(ft.0[k..].to_vec());
        let t = ft1.rank_vector(q.vertex_count());
        let w = ft2.rank_vector(q.vertex_count());
        let (d1, d2) = flag::d1_d2(&t, &w, q, n).map_err(from_err)?;
        rows.push(("d1".into(), d1));
        rows.push(("d2".into(), d2));
        rows.push(("induction_shift".into(), flag::induction_shift(&t, &w, q, n).map_err(from_err)?));
        rows.push(("restriction_shift".into(), flag::restriction_shift(&t, &w, q, n).map_err(from_err)?));
        rows.push(("degree_defect".into(), flag::degree_defect(&ft1, &ft2, q, n).map_err(from_err)?));
        let concat = (0..q.vertex_count()).all(|i| flag::check_concat_identity(&ft1, &ft2, i));
        extra = json!({ "T": t, "W": w, "concat_identity": concat });
    }
    if job.json() {
        let mut m = serde_json::Map::new();
        for (k, v) in &rows {
            m.insert(k.clone(), json!(v));
        }
        m.insert("n".into(), json!(n));
        m.insert("flag".into(), json!(ft.0.iter().map(|&(i, k)| format!("{}:{k}", names[i])).collect::<Vec<_>>()));
        if let Value::Object(e) = extra {
            m.extend(e);
        }
        return Ok((emit_json(&Value::Object(m)), 0));
    }
    let table_rows: Vec<Vec<String>> = rows.iter().map(|(k, v)| vec![k.clone(), v.to_string()]).collect();
    let mut text = format!("# n = {n}, flag {raw}\n");
    text.push_str(&render::table(&["quantity", "value"], &table_rows));
    if let Value::Object(e) = extra {
        for (k, v) in e {
            text.push_str(&format!("{k}: {v}\n"));
        }
    }
    Ok((text, 0))
}

fn grassmann(job: &Job) -> Outcome {
    let raw = job.dim.as_deref().ok_or_else(|| fail(2, "--dim s,l is required"))?;
    let sl = parse_csv(raw).map_err(from_err)?;
    let [s, l] = sl[..] else {
        return Err(fail(2, "--dim must be s,l"));
    };
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for h in job.algebras()? {
        let count = flag::free_grassmannian_count(h.category().ring(), s as usize, l as usize, job.cfg.budget)
            .map_err(from_err)?;
        rows.push(vec![h.q().to_string(), h.n().to_string(), count.to_string()]);
        items.push(json!({ "q": h.q(), "n": h.n(), "s": s, "l": l, "count": count.to_string() }));
    }
    if job.json() {
        return Ok((emit_json(&json!(items)), 0));
    }
    let mut text = format!("# free rank-{s} summands of R^{l}\n");
    text.push_str(&render::table(&["q", "n", "count"], &rows));
    Ok((text, 0))
}

fn interpolate(job: &Job) -> Outcome {
    let word = job.word()?;
    let primes = job.cfg.q.values();
    let got = interpolate_word(&job.quiver, job.cfg.n, &primes, job.cfg.twist, job.cfg.budget, &word)
        .map_err(from_err)?;
    if job.json() {
        let items: Vec<Value> = got
            .iter()
            .map(|((d, label), p)| json!({ "dim": d, "rep": label, "coefficient": p }))
            .collect();
        return Ok((emit_json(&json!({ "n": job.cfg.n, "primes": primes, "terms": items })), 0));
    }
    let plist: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
    let mut text = format!(
        "# n = {}, twist = {}, primes {}, degree bound {}\n",
        job.cfg.n,
        job.cfg.twist,
        plist.join(","),
        primes.len().saturating_sub(2)
    );
    text.push_str(&render::laurent_table(&got));
    Ok((text, 0))
}

fn accept(job: &Job) -> Outcome {
    let results = acceptance::run_all(job.cfg.budget, job.cfg.seed);
    let passed = results.iter().all(|r| r.passed);
    let out = if job.json() {
        let items: Vec<Value> = results
            .iter()
            .map(|r| json!({ "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail }))
            .collect();
        emit_json(&json!(items))
    } else {
        let mut s: String = results.iter().map(|r| r.line() + "\n").collect();
        s.push_str(&format!(
            "{} of {} criteria passed\n",
            results.iter().filter(|r| r.passed).count(),
            results.len()
        ));
        s
    };
    Ok((out, if passed { 0 } else { 1 }))
}

fn run(cli: &Cli) -> Outcome {
    let job = build_job(cli)?;
    match &cli.command {
        Command::Classify => classify(&job),
        Command::Product => product(&job),
        Command::DeltaCheck => delta_check(&job),
        Command::Serre { coeff } => serre(&job, coeff),
        Command::Commute => commute(&job),
        Command::Geom { flag, split } => geom(&job, flag, *split),
        Command::Grassmann => grassmann(&job),
        Command::Interpolate => interpolate(&job),
        Command::Accept => accept(&job),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hallring::hall::Twist;

    #[test]
    fn exit_codes() {
        assert_eq!(error_code(&HallError::BudgetExceeded { what: String::new(), needed: 2, cap: 1 }), 3);
        assert_eq!(error_code(&HallError::Interpolation(String::new())), 4);
        assert_eq!(error_code(&HallError::Parse(String::new())), 2);
    }

    #[test]
    fn twist_flag_parses() {
        let cli = Cli::try_parse_from(["hallring", "product", "--twist", "integer", "--word", "1"]).unwrap();
        assert_eq!(build_job(&cli).unwrap().cfg.twist, Twist::Integer);
    }
}
