//! Fixture files and the corpus runner.

use crate::error::{Error, Result};
use crate::homotopy::{homotopic_finite, object_equal, simd_equiv, Anchor, FiniteOptions, Verdict};
use crate::io::{parse_json, step_from_json, vertex_set, CoverDesc, LabelDesc, SpaceDesc, StringDesc, ZMapDesc};
use crate::space::{FiniteSpace, Space};
use crate::splitting::{well_split, well_split_half_lines, Cover};
use crate::strings::{eliminable_check, string_equiv, StringOfMaps};
use crate::zmap::ZMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureDesc {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub space: SpaceDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atlas: Option<Vec<Vec<LabelDesc>>>,
    #[serde(default)]
    pub zmaps: Vec<ZMapDesc>,
    #[serde(default)]
    pub strings: Vec<StringDesc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<Vec<LabelDesc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<LabelDesc>,
    #[serde(default)]
    pub expect: Vec<Expectation>,
}

/// One expected outcome. `source` says where the value comes from:
/// a worked example, a trivial consequence, or an oracle run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    #[serde(flatten)]
    pub check: Check,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    WellSplit { expect: bool, #[serde(default)] failed_condition: Option<u8> },
    HalfLines { expect: bool },
    Homotopy { p: usize, q: usize, verdict: String },
    Pi1 { length_cap: usize, classes: usize },
    ZmapEq { a: usize, b: usize, verdict: String },
    EventuallyEqual { a: usize, b: usize, expect: bool },
    DeletePoint { zmap: usize, at: i64, #[serde(default)] error: Option<String> },
    Merge { string: usize, moves: Vec<(usize, i64)>, #[serde(default)] result: Option<usize>, #[serde(default)] error: Option<String> },
    StringEqual { a: usize, b: usize, verdict: String },
    Eliminable { object: usize, incoming: Vec<usize>, outgoing: Vec<usize>, expect: bool },
    VkVerify { expect: bool },
    VkPreserve { string: usize, step: Value, verdict: String },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::WellSplit { .. } => "well_split",
            Check::HalfLines { .. } => "half_lines",
            Check::Homotopy { .. } => "homotopy",
            Check::Pi1 { .. } => "pi1",
            Check::ZmapEq { .. } => "zmap_eq",
            Check::EventuallyEqual { .. } => "eventually_equal",
            Check::DeletePoint { .. } => "delete_point",
            Check::Merge { .. } => "merge",
            Check::StringEqual { .. } => "string_equal",
            Check::Eliminable { .. } => "eliminable",
            Check::VkVerify { .. } => "vk_verify",
            Check::VkPreserve { .. } => "vk_preserve",
        }
    }
}

/// A parsed and validated fixture.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub space: Arc<Space>,
    pub cover: Option<CoverDesc>,
    pub atlas: Option<Vec<Vec<usize>>>,
    pub zmaps: Vec<ZMap>,
    pub strings: Vec<StringOfMaps>,
    pub paths: Vec<Vec<i64>>,
    pub basepoint: Option<usize>,
    pub expect: Vec<Expectation>,
    pub desc: FixtureDesc,
}

/// Name of an error variant, for comparing against fixtures.
pub fn error_name(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(['(', ' ']).next().unwrap_or_default().to_string()
}

fn validation(what: &str, e: Error) -> Error {
    match e {
        Error::Parse(_) => e,
        other => Error::Validation(format!("{what}: {other}")),
    }
}

pub fn parse_fixture(text: &str) -> Result<Fixture> {
    let desc: FixtureDesc = parse_json(text)?;
    Fixture::from_desc(desc)
}

impl Fixture {
    pub fn from_desc(desc: FixtureDesc) -> Result<Fixture> {
        let space = Arc::new(desc.space.build().map_err(|e| validation("space", e))?);
        let fin = space.finite();
        let atlas = match (&desc.atlas, fin) {
            (Some(a), Some(f)) => Some(a.iter().map(|u| vertex_set(f, u)).collect::<Result<Vec<_>>>().map_err(|e| validation("atlas", e))?),
            (Some(_), None) => return Err(Error::Validation("atlas needs a finite space".into())),
            (None, _) => None,
        };
        if let (Some(c), Some(f)) = (&desc.cover, fin) {
            c.build_finite(f).map_err(|e| validation("cover", e))?;
        }
        let zmaps = desc
            .zmaps
            .iter()
            .enumerate()
            .map(|(k, m)| m.build(Some(&space)).map_err(|e| validation(&format!("zmap {k}"), e)))
            .collect::<Result<Vec<_>>>()?;
        let strings = desc
            .strings
            .iter()
            .enumerate()
            .map(|(k, s)| s.build(Some(&space)).map_err(|e| validation(&format!("string {k}"), e)))
            .collect::<Result<Vec<_>>>()?;
        let paths = desc
            .paths
            .iter()
            .map(|p| {
                p.iter()
                    .map(|l| match &*space {
                        Space::Finite(f) => Ok(f.vertex(&l.to_label())? as i64),
                        Space::IntLine(_) => match l {
                            LabelDesc::Int(z) => Ok(*z),
                            LabelDesc::Name(n) => Err(Error::Validation(format!("integer expected, got {n:?}"))),
                        },
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| validation("paths", e))?;
        let basepoint = match (&desc.basepoint, fin) {
            (Some(b), Some(f)) => Some(f.vertex(&b.to_label()).map_err(|e| validation("basepoint", e))?),
            _ => None,
        };
        Ok(Fixture {
            name: desc.name.clone(),
            space,
            cover: desc.cover.clone(),
            atlas,
            zmaps,
            strings,
            paths,
            basepoint,
            expect: desc.expect.clone(),
            desc,
        })
    }

    pub fn finite(&self) -> Result<&FiniteSpace> {
        self.space.finite().ok_or(Error::Validation(format!("{}: finite space expected", self.name)))
    }

    pub fn finite_cover(&self) -> Result<Cover> {
        let c = self.cover.as_ref().ok_or(Error::Validation(format!("{}: no cover", self.name)))?;
        c.build_finite(self.finite()?)
    }

    pub fn atlas(&self) -> Result<&[Vec<usize>]> {
        self.atlas.as_deref().ok_or(Error::Validation(format!("{}: no atlas", self.name)))
    }

    pub fn zmap(&self, k: usize) -> Result<&ZMap> {
        self.zmaps.get(k).ok_or(Error::IndexOutOfRange(k))
    }

    pub fn string(&self, k: usize) -> Result<&StringOfMaps> {
        self.strings.get(k).ok_or(Error::IndexOutOfRange(k))
    }

    /// Canonical JSON of the validated content.
    pub fn emit(&self) -> FixtureDesc {
        FixtureDesc {
            zmaps: self.zmaps.iter().map(|m| ZMapDesc::of(m, false)).collect(),
            strings: self.strings.iter().map(|s| StringDesc::of(s, false)).collect(),
            space: SpaceDesc::of(&self.space),
            ..self.desc.clone()
        }
    }
}

pub const DEFAULT_BOUND: usize = 64;

fn verdict_of(v: &Verdict) -> String {
    v.name().to_string()
}

/// Runs one expectation; returns `(expected, actual)` as display strings.
pub fn run_check(fx: &Fixture, check: &Check, bound: usize) -> Result<(String, String)> {
    Ok(match check {
        Check::WellSplit { expect, failed_condition } => {
            let r = well_split(fx.finite()?, &fx.finite_cover()?);
            let cond = r.failures.first().map(|f| f.condition);
            let want = format!("{expect} {failed_condition:?}");
            let got = if failed_condition.is_some() { format!("{} {cond:?}", r.verdict) } else { format!("{} None", r.verdict) };
            (want, got)
        }
        Check::HalfLines { expect } => {
            let Space::IntLine(scale) = &*fx.space else {
                return Err(Error::Validation("half-line cover needs the integer line".into()));
            };
            let (a, b) = fx.cover.as_ref().ok_or(Error::Validation("no cover".into()))?.line_regions()?;
            let r = well_split_half_lines(*scale, &a, &b)?;
            (expect.to_string(), r.verdict.to_string())
        }
        Check::Homotopy { p, q, verdict } => {
            let (p, q) = (fx.paths.get(*p).ok_or(Error::IndexOutOfRange(*p))?, fx.paths.get(*q).ok_or(Error::IndexOutOfRange(*q))?);
            let opts = FiniteOptions { anchor: Anchor::Both, max_rows: bound, ..FiniteOptions::default() };
            (verdict.clone(), verdict_of(&homotopic_finite(&fx.space, p, q, &opts)))
        }
        Check::Pi1 { length_cap, classes } => {
            let base = fx.basepoint.ok_or(Error::Validation("no basepoint".into()))?;
            let c = crate::pi1::pi1_classes(&fx.space, base, *length_cap)?;
            (classes.to_string(), c.class_count().to_string())
        }
        Check::ZmapEq { a, b, verdict } => (verdict.clone(), verdict_of(&zmap_eq(fx.zmap(*a)?, fx.zmap(*b)?, bound)?)),
        Check::EventuallyEqual { a, b, expect } => (expect.to_string(), fx.zmap(*a)?.eventually_equal(fx.zmap(*b)?)?.to_string()),
        Check::DeletePoint { zmap, at, error } => {
            let got = match fx.zmap(*zmap)?.delete_point(*at) {
                Ok(_) => "ok".to_string(),
                Err(e) => error_name(&e),
            };
            (error.clone().unwrap_or_else(|| "ok".into()), got)
        }
        Check::Merge { string, moves, result, error } => {
            let mut s = fx.string(*string)?.clone();
            let mut failure = None;
            for &(at, point) in moves {
                match s.apply_merge(at, point) {
                    Ok(next) => s = next,
                    Err(e) => {
                        failure = Some(error_name(&e));
                        break;
                    }
                }
            }
            let want = match (result, error) {
                (_, Some(e)) => e.clone(),
                (Some(k), None) => format!("{}", fx.zmap(*k)?),
                (None, None) => "ok".into(),
            };
            let got = match failure {
                Some(e) => e,
                None if result.is_some() => s.maps().iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", "),
                None => "ok".into(),
            };
            (want, got)
        }
        Check::StringEqual { a, b, verdict } => (verdict.clone(), verdict_of(&string_equiv(fx.string(*a)?, fx.string(*b)?, bound)?)),
        Check::Eliminable { object, incoming, outgoing, expect } => {
            let inc = incoming.iter().map(|&k| fx.string(k).cloned()).collect::<Result<Vec<_>>>()?;
            let out = outgoing.iter().map(|&k| fx.string(k).cloned()).collect::<Result<Vec<_>>>()?;
            let r = eliminable_check(fx.zmap(*object)?, &inc, &out);
            (expect.to_string(), r.all_cuttable.to_string())
        }
        Check::VkVerify { expect } => {
            let r = crate::vankampen::verify_cover_hypotheses(fx.finite()?, &fx.finite_cover()?, fx.atlas()?)?;
            (expect.to_string(), r.ok.to_string())
        }
        Check::VkPreserve { string, step, verdict } => {
            let step = step_from_json(&fx.space, step)?;
            let v = crate::vankampen::relation_preservation_test(fx.string(*string)?, &step, &fx.finite_cover()?, fx.atlas()?, bound)?;
            (verdict.clone(), verdict_of(&v))
        }
    })
}

/// Symmetric maps are compared as objects, other maps by point moves.
pub fn zmap_eq(f: &ZMap, g: &ZMap, bound: usize) -> Result<Verdict> {
    if f.is_symmetric() && g.is_symmetric() {
        object_equal(f, g, bound)
    } else {
        simd_equiv(f, g, bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub fixture: String,
    pub index: usize,
    pub check: String,
    pub source: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub fixtures: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub warnings: Vec<String>,
    pub results: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<crate::random::LawSummary>,
}

impl CorpusReport {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.random.as_ref().is_none_or(|r| r.failures == 0)
    }
}

pub fn run_fixture(fx: &Fixture, bound: usize) -> Vec<CheckResult> {
    fx.expect
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (expected, actual) = match run_check(fx, &e.check, bound) {
                Ok(pair) => pair,
                Err(err) => ("no error".into(), format!("error: {err}")),
            };
            CheckResult {
                fixture: fx.name.clone(),
                index: i,
                check: e.check.name().into(),
                source: e.source.clone(),
                pass: expected == actual,
                expected,
                actual,
            }
        })
        .collect()
}

/// Runs every `*.json` fixture under `dir` in file-name order; with a
/// seed, also runs a sample of the random law suite.
pub fn corpus_run(dir: &Path, seed: Option<u64>, bound: usize) -> Result<CorpusReport> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Validation(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut report = CorpusReport { fixtures: 0, checks: 0, passed: 0, failed: 0, warnings: vec![], results: vec![], random: None };
    if files.is_empty() {
        report.warnings.push(format!("no fixtures in {}", dir.display()));
    }
    for path in files {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
        let fx = match parse_fixture(&text) {
            Ok(fx) => fx,
            Err(e) => {
                let name = path.file_name().unwrap().to_string_lossy().to_string();
                report.results.push(CheckResult {
                    fixture: name,
                    index: 0,
                    check: "parse".into(),
                    source: String::new(),
                    expected: "valid fixture".into(),
                    actual: e.to_string(),
                    pass: false,
                });
                continue;
            }
        };
        report.fixtures += 1;
        report.results.extend(run_fixture(&fx, bound));
    }
    report.checks = report.results.len();
    report.passed = report.results.iter().filter(|r| r.pass).count();
    report.failed = report.checks - report.passed;
    if let Some(seed) = seed {
        report.random = Some(crate::random::law_sample(seed, 10, bound));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
        "name": "tiny",
        "space": {"kind": "finite", "vertices": [0, 1, 2, 3], "edges": [[0,1],[1,2],[2,3],[3,0]]},
        "zmaps": [],
        "expect": []
    }"#;

    #[test]
    fn empty_lists_are_fine() {
        let fx = parse_fixture(TINY).unwrap();
        assert!(fx.zmaps.is_empty() && fx.strings.is_empty());
        let again = parse_fixture(&serde_json::to_string(&fx.emit()).unwrap()).unwrap();
        assert_eq!(again.emit(), fx.emit());
    }

    #[test]
    fn unknown_vertex_in_edge() {
        let bad = TINY.replace("[3,0]", "[3,7]");
        assert!(matches!(parse_fixture(&bad), Err(Error::Validation(_))));
        assert!(matches!(parse_fixture("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn error_names() {
        assert_eq!(error_name(&Error::EmptyMergeWindow(4, 0)), "EmptyMergeWindow");
        assert_eq!(error_name(&Error::SpaceMismatch), "SpaceMismatch");
    }

    #[test]
    fn empty_directory_warns() {
        let dir = std::env::temp_dir().join(format!("scg-empty-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let r = corpus_run(&dir, None, DEFAULT_BOUND).unwrap();
        assert!(r.ok() && r.warnings.len() == 1 && r.checks == 0);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
