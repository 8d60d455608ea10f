//! The `scg` command line.
//!
//! Exit codes: 0 proved or verified, 1 refuted or failed, 2 unknown,
//! 3 invalid input.

use crate::corpus::{corpus_run, parse_fixture, zmap_eq, Fixture, DEFAULT_BOUND};
use crate::error::{Error, Result};
use crate::homotopy::{homotopic_finite, Anchor, FiniteOptions, Verdict};
use crate::io::{parse_json, step_from_json, verdict_json, SpaceDesc, StringDesc};
use crate::space::{self, Space};
use crate::splitting::{well_split, well_split_half_lines};
use crate::strings::{eliminable_check, normalize, pi1_embedding, string_equiv};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "scg", about = "Semi-coarse homotopy checker", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Input file (a directory for `corpus run`).
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    pub bound: usize,
    #[arg(long = "length-cap", global = true, default_value_t = 12)]
    pub length_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Well-splitting of the fixture's cover.
    Wellsplit,
    /// Rel-endpoint homotopy between the fixture's first two paths.
    Homotopy,
    /// Loop classes at the fixture's basepoint.
    Pi1,
    #[command(subcommand)]
    Zmap(ZmapCmd),
    #[command(subcommand)]
    String(StringCmd),
    #[command(subcommand)]
    Groupoid(GroupoidCmd),
    #[command(subcommand)]
    Vk(VkCmd),
    #[command(subcommand)]
    Corpus(CorpusCmd),
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Debug, Subcommand)]
pub enum SpaceCmd {
    /// Validate a space and report its basic invariants.
    Check,
    /// Emit the canonical descriptor of a space.
    Build,
}

#[derive(Debug, Subcommand)]
pub enum ZmapCmd {
    /// Compare the first two maps.
    Eq,
}

#[derive(Debug, Subcommand)]
pub enum StringCmd {
    Normalize,
    Equal,
    Star,
}

#[derive(Debug, Subcommand)]
pub enum GroupoidCmd {
    /// Embed every loop class and check the images stay distinct.
    Embed,
    /// Probe whether the first map, as an object, is eliminable.
    Eliminable,
}

#[derive(Debug, Subcommand)]
pub enum VkCmd {
    VerifyCover,
    Factorize,
    Decompose,
    Preserve {
        /// A rewrite step as JSON, e.g. `{"op":"dop","at":2}`.
        #[arg(long = "move")]
        step: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusCmd {
    Run,
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    /// Brute-force loop class counts for the fixture's basepoint.
    Pi1,
}

/// A finished command: its report and exit code.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

fn verdict_outcome(space: &Space, v: &Verdict, extra: Value) -> Outcome {
    let mut report = verdict_json(space, v);
    if let (Value::Object(r), Value::Object(e)) = (&mut report, extra) {
        r.extend(e);
    }
    Outcome { report, code: v.exit_code() }
}

fn ok_if(flag: bool, report: Value) -> Outcome {
    Outcome { report, code: if flag { 0 } else { 1 } }
}

fn read_input(common: &Common) -> Result<String> {
    let path = common.input.as_ref().ok_or(Error::Validation("--in is required".into()))?;
    std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

fn fixture(common: &Common) -> Result<Fixture> {
    parse_fixture(&read_input(common)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

fn labels(space: &Space, vs: &[usize]) -> Vec<String> {
    match space {
        Space::Finite(f) => vs.iter().map(|&v| f.label(v).to_string()).collect(),
        Space::IntLine(_) => vs.iter().map(|v| v.to_string()).collect(),
    }
}

pub fn execute(cmd: &Command, common: &Common) -> Result<Outcome> {
    let bound = common.bound;
    match cmd {
        Command::Space(sub) => {
            let text = read_input(common)?;
            let desc: SpaceDesc = match parse_json::<crate::corpus::FixtureDesc>(&text) {
                Ok(f) => f.space,
                Err(_) => parse_json(&text)?,
            };
            let space = desc.build()?;
            match sub {
                SpaceCmd::Build => Ok(Outcome { report: to_value(&SpaceDesc::of(&space)), code: 0 }),
                SpaceCmd::Check => {
                    let report = match &space {
                        Space::Finite(f) => json!({
                            "kind": "finite",
                            "vertices": f.len(),
                            "edges": f.edge_count(),
                            "connected": space::is_connected(&space),
                            "coarse": space::is_coarse(&space),
                            "components": space::components(f).iter().map(|c| labels(&space, c)).collect::<Vec<_>>(),
                        }),
                        Space::IntLine(_) => json!({"kind": "intline", "connected": true, "coarse": space::is_coarse(&space)}),
                    };
                    Ok(Outcome { report, code: 0 })
                }
            }
        }
        Command::Wellsplit => {
            let fx = fixture(common)?;
            match &*fx.space {
                Space::Finite(f) => {
                    let r = well_split(f, &fx.finite_cover()?);
                    Ok(ok_if(r.verdict, to_value(&r)))
                }
                Space::IntLine(scale) => {
                    let (a, b) = fx.cover.as_ref().ok_or(Error::Validation("no cover".into()))?.line_regions()?;
                    let r = well_split_half_lines(*scale, &a, &b)?;
                    Ok(ok_if(r.verdict, to_value(&r)))
                }
            }
        }
        Command::Homotopy => {
            let fx = fixture(common)?;
            let [p, q] = [0, 1].map(|k| fx.paths.get(k).cloned());
            let (Some(p), Some(q)) = (p, q) else { return Err(Error::Validation("two paths required".into())) };
            let opts = FiniteOptions { anchor: Anchor::Both, max_rows: bound, ..FiniteOptions::default() };
            Ok(verdict_outcome(&fx.space, &homotopic_finite(&fx.space, &p, &q, &opts), json!({})))
        }
        Command::Pi1 => {
            let fx = fixture(common)?;
            let base = fx.basepoint.ok_or(Error::Validation("no basepoint".into()))?;
            let c = crate::pi1::pi1_classes(&fx.space, base, common.length_cap)?;
            Ok(Outcome { report: to_value(&c), code: 0 })
        }
        Command::Zmap(ZmapCmd::Eq) => {
            let fx = fixture(common)?;
            let v = zmap_eq(fx.zmap(0)?, fx.zmap(1)?, bound)?;
            let ee = fx.zmap(0)?.eventually_equal(fx.zmap(1)?)?;
            Ok(verdict_outcome(&fx.space, &v, json!({"eventually_equal": ee})))
        }
        Command::String(sub) => {
            let fx = fixture(common)?;
            match sub {
                StringCmd::Normalize => {
                    let n = normalize(fx.string(0)?);
                    let report = json!({
                        "result": to_value(&StringDesc::of(&n.string, false)),
                        "trace": crate::io::trace_json(&fx.space, &n.trace),
                    });
                    Ok(Outcome { report, code: 0 })
                }
                StringCmd::Equal => {
                    let v = string_equiv(fx.string(0)?, fx.string(1)?, bound)?;
                    Ok(verdict_outcome(&fx.space, &v, json!({})))
                }
                StringCmd::Star => {
                    let s = fx.string(0)?.star(fx.string(1)?)?;
                    Ok(Outcome { report: to_value(&StringDesc::of(&s, false)), code: 0 })
                }
            }
        }
        Command::Groupoid(GroupoidCmd::Embed) => {
            let fx = fixture(common)?;
            let base = fx.basepoint.ok_or(Error::Validation("no basepoint".into()))?;
            let classes = crate::pi1::pi1_classes(&fx.space, base, common.length_cap)?;
            let images = classes
                .classes
                .iter()
                .map(|c| pi1_embedding(fx.space.clone(), base as i64, &c.representative))
                .collect::<Result<Vec<_>>>()?;
            let mut pairs = Vec::new();
            let mut clash = false;
            for a in 0..images.len() {
                for b in a + 1..images.len() {
                    let v = string_equiv(&images[a], &images[b], bound)?;
                    clash |= v.is_proved();
                    pairs.push(json!({"a": a, "b": b, "verdict": v.name()}));
                }
            }
            let report = json!({
                "classes": classes.class_count(),
                "images": images.iter().map(|s| to_value(&StringDesc::of(s, false))).collect::<Vec<_>>(),
                "pairs": pairs,
                "inconsistent": clash,
            });
            Ok(ok_if(!clash, report))
        }
        Command::Groupoid(GroupoidCmd::Eliminable) => {
            let fx = fixture(common)?;
            let object = fx.zmap(0)?;
            let mut incoming = Vec::new();
            let mut outgoing = Vec::new();
            for s in &fx.strings {
                if crate::homotopy::object_equal(s.right_object(), object, bound)?.is_proved() {
                    incoming.push(s.clone());
                }
                if crate::homotopy::object_equal(s.left_object(), object, bound)?.is_proved() {
                    outgoing.push(s.clone());
                }
            }
            let r = eliminable_check(object, &incoming, &outgoing);
            let probes: Vec<Value> = r
                .probes
                .iter()
                .map(|p| json!({"incoming": p.incoming, "outgoing": p.outgoing, "cuttable": p.cuttable, "reason": p.reason}))
                .collect();
            Ok(ok_if(r.all_cuttable, json!({"all_cuttable": r.all_cuttable, "probes": probes})))
        }
        Command::Vk(sub) => {
            let fx = fixture(common)?;
            let fin = fx.finite()?;
            let cover = fx.finite_cover()?;
            match sub {
                VkCmd::VerifyCover => {
                    let r = crate::vankampen::verify_cover_hypotheses(fin, &cover, fx.atlas()?)?;
                    Ok(ok_if(r.ok, to_value(&r)))
                }
                VkCmd::Factorize => {
                    let fz = crate::vankampen::factorize_string(fx.string(0)?, &cover)?;
                    let report = json!({
                        "factors": to_value(&StringDesc::of(&fz.string, false)),
                        "tags": fz.tags,
                        "trace": crate::io::trace_json(&fx.space, &fz.trace),
                    });
                    Ok(Outcome { report, code: 0 })
                }
                VkCmd::Decompose => {
                    let w = crate::vankampen::decompose(fx.string(0)?, &cover, fx.atlas()?)?;
                    let factors: Vec<Value> = w
                        .factors
                        .iter()
                        .map(|f| json!({"tag": f.tag, "piece": to_value(&StringDesc::of(&f.piece, false))}))
                        .collect();
                    Ok(Outcome { report: json!({"word": w.to_string(), "factors": factors}), code: 0 })
                }
                VkCmd::Preserve { step } => {
                    let v: Value = parse_json(step)?;
                    let step = step_from_json(&fx.space, &v)?;
                    let verdict = crate::vankampen::relation_preservation_test(fx.string(0)?, &step, &cover, fx.atlas()?, bound)?;
                    Ok(verdict_outcome(&fx.space, &verdict, json!({})))
                }
            }
        }
        Command::Corpus(CorpusCmd::Run) => {
            let dir = common.input.clone().unwrap_or_else(|| PathBuf::from("corpus"));
            let r = corpus_run(&dir, common.seed, bound)?;
            Ok(ok_if(r.ok(), to_value(&r)))
        }
        Command::Oracle(OracleCmd::Pi1) => {
            let fx = fixture(common)?;
            let base = fx.basepoint.ok_or(Error::Validation("no basepoint".into()))?;
            let fin = fx.finite()?;
            let counts: Vec<Value> = (2..=common.length_cap)
                .step_by(2)
                .map(|cap| json!({"length_cap": cap, "classes": crate::oracle::loop_class_count(fin, base, cap)}))
                .collect();
            Ok(Outcome { report: json!({"fixture": fx.name, "source": "oracle", "counts": counts}), code: 0 })
        }
    }
}

/// Flattens a JSON report into `path: value` lines.
pub fn render_text(v: &Value) -> String {
    fn go(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    go(&p, x, out);
                }
            }
            Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
                for (i, x) in a.iter().enumerate() {
                    go(&format!("{prefix}[{i}]"), x, out);
                }
            }
            other => {
                out.push_str(prefix);
                out.push_str(": ");
                out.push_str(&other.to_string());
                out.push('\n');
            }
        }
    }
    let mut out = String::new();
    go("", v, &mut out);
    out
}

/// Runs the CLI on `args` and returns `(stdout text, exit code)`.
pub fn run_to_string<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            return (e.to_string(), code);
        }
    };
    match execute(&cli.command, &cli.common) {
        Ok(o) => {
            let text = match cli.common.format {
                Format::Json => serde_json::to_string_pretty(&o.report).expect("report serializes") + "\n",
                Format::Text => render_text(&o.report),
            };
            (text, o.code)
        }
        Err(e) => (format!("error: {e}\n"), 3),
    }
}

pub fn main_with_args() -> i32 {
    let (text, code) = run_to_string(std::env::args_os());
    if code == 3 {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    code
}

