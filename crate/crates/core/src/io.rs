//! JSON descriptors and their conversion to library types.
//!
//! Finite-space values are written as vertex labels (a JSON number or
//! string); integer-line values are plain integers. Periodic words and
//! affine corrections are indexed by `z mod period` on absolute positions.

use crate::error::{Error, Result};
use crate::homotopy::{Evidence, Verdict};
use crate::label::Label;
use crate::space::{FiniteSpace, Scale, Space};
use crate::splitting::{Cover, LineRegion};
use crate::strings::{Step, StringOfMaps, Trace, JUNCTION_BOUND};
use crate::tail::Tail;
use crate::zmap::ZMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelDesc {
    Int(i64),
    Name(String),
}

impl LabelDesc {
    pub fn to_label(&self) -> Label {
        match self {
            LabelDesc::Int(v) => Label::Int(*v),
            LabelDesc::Name(s) => Label::Name(s.clone()),
        }
    }

    pub fn from_label(l: &Label) -> LabelDesc {
        match l {
            Label::Int(v) => LabelDesc::Int(*v),
            other => LabelDesc::Name(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScaleDesc {
    Finite(u64),
    Inf(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceDesc {
    Finite { vertices: Vec<LabelDesc>, edges: Vec<(LabelDesc, LabelDesc)> },
    Intline { scale: ScaleDesc },
}

impl SpaceDesc {
    pub fn build(&self) -> Result<Space> {
        match self {
            SpaceDesc::Finite { vertices, edges } => Ok(Space::Finite(FiniteSpace::build(
                vertices.iter().map(|v| v.to_label()),
                edges.iter().map(|(a, b)| (a.to_label(), b.to_label())),
            )?)),
            SpaceDesc::Intline { scale } => Ok(Space::IntLine(match scale {
                ScaleDesc::Finite(n) if *n > 0 => Scale::Finite(*n),
                ScaleDesc::Inf(s) if s == "inf" => Scale::Inf,
                other => return Err(Error::Validation(format!("bad scale {other:?}"))),
            })),
        }
    }

    pub fn of(space: &Space) -> SpaceDesc {
        match space {
            Space::Finite(f) => SpaceDesc::Finite {
                vertices: f.labels().iter().map(LabelDesc::from_label).collect(),
                edges: f
                    .edges()
                    .into_iter()
                    .map(|(a, b)| (LabelDesc::from_label(f.label(a)), LabelDesc::from_label(f.label(b))))
                    .collect(),
            },
            Space::IntLine(Scale::Finite(n)) => SpaceDesc::Intline { scale: ScaleDesc::Finite(*n) },
            Space::IntLine(Scale::Inf) => SpaceDesc::Intline { scale: ScaleDesc::Inf("inf".into()) },
        }
    }
}

fn value_in(space: &Space, v: &LabelDesc) -> Result<i64> {
    match space {
        Space::Finite(f) => Ok(f.vertex(&v.to_label())? as i64),
        Space::IntLine(_) => match v {
            LabelDesc::Int(z) => Ok(*z),
            LabelDesc::Name(s) => Err(Error::Validation(format!("integer-line value expected, got {s:?}"))),
        },
    }
}

fn value_out(space: &Space, v: i64) -> LabelDesc {
    match space {
        Space::Finite(f) => LabelDesc::from_label(f.label(v as usize)),
        Space::IntLine(_) => LabelDesc::Int(v),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TailDesc {
    Const { value: LabelDesc },
    Periodic { word: Vec<LabelDesc> },
    Affine { slope: i64, offset: i64, corr: Vec<i64> },
}

impl TailDesc {
    pub fn build(&self, space: &Space) -> Result<Tail> {
        Ok(match self {
            TailDesc::Const { value } => Tail::constant(value_in(space, value)?),
            TailDesc::Periodic { word } => {
                if word.is_empty() {
                    return Err(Error::Validation("empty periodic word".into()));
                }
                Tail::periodic(word.iter().map(|v| value_in(space, v)).collect::<Result<_>>()?)
            }
            TailDesc::Affine { slope, offset, corr } => {
                if corr.is_empty() {
                    return Err(Error::Validation("empty affine correction".into()));
                }
                Tail::affine(*slope, *offset, corr.clone())
            }
        })
    }

    pub fn of(space: &Space, t: &Tail) -> TailDesc {
        match t {
            Tail::Const(v) => TailDesc::Const { value: value_out(space, *v) },
            Tail::Periodic(w) => TailDesc::Periodic { word: w.iter().map(|&v| value_out(space, v)).collect() },
            Tail::Affine { slope, offset, corr } => TailDesc::Affine { slope: *slope, offset: *offset, corr: corr.clone() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowDesc {
    pub lo: i64,
    pub values: Vec<LabelDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZMapDesc {
    /// Omitted inside fixtures, where the fixture space applies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceDesc>,
    pub window: WindowDesc,
    pub left_tail: TailDesc,
    pub right_tail: TailDesc,
}

impl ZMapDesc {
    pub fn build(&self, ambient: Option<&Arc<Space>>) -> Result<ZMap> {
        let space = match (&self.space, ambient) {
            (Some(d), _) => Arc::new(d.build()?),
            (None, Some(s)) => s.clone(),
            (None, None) => return Err(Error::Validation("map has no space".into())),
        };
        let values = self.window.values.iter().map(|v| value_in(&space, v)).collect::<Result<Vec<_>>>()?;
        let left = self.left_tail.build(&space)?;
        let right = self.right_tail.build(&space)?;
        ZMap::new(space, self.window.lo, values, left, right)
    }

    pub fn of(f: &ZMap, with_space: bool) -> ZMapDesc {
        let s = f.space();
        ZMapDesc {
            space: with_space.then(|| SpaceDesc::of(s)),
            window: WindowDesc { lo: f.lo(), values: f.values().iter().map(|&v| value_out(s, v)).collect() },
            left_tail: TailDesc::of(s, f.left()),
            right_tail: TailDesc::of(s, f.right()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringDesc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceDesc>,
    pub maps: Vec<ZMapDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_object: Option<ZMapDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_object: Option<ZMapDesc>,
}

impl StringDesc {
    pub fn build(&self, ambient: Option<&Arc<Space>>) -> Result<StringOfMaps> {
        let own = self.space.as_ref().map(|d| d.build().map(Arc::new)).transpose()?;
        let space = own.as_ref().or(ambient);
        let maps = self.maps.iter().map(|m| m.build(space)).collect::<Result<Vec<_>>>()?;
        if maps.is_empty() {
            return Err(Error::Validation("string has no maps".into()));
        }
        let space = Some(maps[0].space_arc());
        match (&self.left_object, &self.right_object) {
            (None, None) => StringOfMaps::new(maps),
            (l, r) => {
                let dflt = StringOfMaps::new(maps.clone());
                let left = match l {
                    Some(d) => d.build(space)?,
                    None => dflt.as_ref().map_err(Clone::clone)?.left_object().clone(),
                };
                let right = match r {
                    Some(d) => d.build(space)?,
                    None => dflt.as_ref().map_err(Clone::clone)?.right_object().clone(),
                };
                StringOfMaps::with_objects(maps, left, right, JUNCTION_BOUND)
            }
        }
    }

    pub fn of(s: &StringOfMaps, with_space: bool) -> StringDesc {
        StringDesc {
            space: with_space.then(|| SpaceDesc::of(s.space())),
            maps: s.maps().iter().map(|m| ZMapDesc::of(m, false)).collect(),
            left_object: Some(ZMapDesc::of(s.left_object(), false)),
            right_object: Some(ZMapDesc::of(s.right_object(), false)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionDesc {
    AtLeast(i64),
    AtMost(i64),
}

impl RegionDesc {
    pub fn to_region(&self) -> LineRegion {
        match self {
            RegionDesc::AtLeast(p) => LineRegion::AtLeast(*p),
            RegionDesc::AtMost(q) => LineRegion::AtMost(*q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetDesc {
    Vertices(Vec<LabelDesc>),
    Line(RegionDesc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDesc {
    #[serde(rename = "A")]
    pub a: SetDesc,
    #[serde(rename = "B")]
    pub b: SetDesc,
}

pub fn vertex_set(space: &FiniteSpace, set: &[LabelDesc]) -> Result<Vec<usize>> {
    set.iter().map(|l| space.vertex(&l.to_label())).collect()
}

impl CoverDesc {
    pub fn build_finite(&self, space: &FiniteSpace) -> Result<Cover> {
        match (&self.a, &self.b) {
            (SetDesc::Vertices(a), SetDesc::Vertices(b)) => Cover::new(space, &vertex_set(space, a)?, &vertex_set(space, b)?),
            _ => Err(Error::Validation("finite spaces need vertex-set covers".into())),
        }
    }

    pub fn line_regions(&self) -> Result<(LineRegion, LineRegion)> {
        match (&self.a, &self.b) {
            (SetDesc::Line(a), SetDesc::Line(b)) => Ok((a.to_region(), b.to_region())),
            _ => Err(Error::Validation("integer-line covers are half-lines".into())),
        }
    }
}

pub fn step_json(space: &Space, step: &Step) -> Value {
    let zm = |m: &ZMap| serde_json::to_value(ZMapDesc::of(m, false)).expect("descriptor serializes");
    match step {
        Step::Dop { at } => json!({"op": "dop", "at": at}),
        Step::InsertOpposite { after, map, shift } => json!({"op": "insert_opposite", "after": after, "map": zm(map), "shift": shift}),
        Step::Merge { at, point } => json!({"op": "merge", "at": at, "point": point}),
        Step::Split { at, point } => json!({"op": "split", "at": at, "point": point}),
        Step::Point { map, mv } => {
            let mut v = serde_json::to_value(mv).expect("move serializes");
            if let crate::zmap::PointMove::Add { value, .. } = mv {
                v["value"] = serde_json::to_value(value_out(space, *value)).expect("label serializes");
            }
            json!({"op": "point", "map": map, "move": v})
        }
        Step::Shift { map, by } => json!({"op": "shift", "map": map, "by": by}),
        Step::Cut { at } => json!({"op": "cut", "at": at}),
        Step::Uncut { at, first, second } => json!({"op": "uncut", "at": at, "first": zm(first), "second": zm(second)}),
        Step::Hstep { map, lo, rows } => json!({"op": "hstep", "map": map, "lo": lo, "rows": rows}),
    }
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?} in step")))
}

fn int(v: &Value, k: &str) -> Result<i64> {
    field(v, k)?.as_i64().ok_or_else(|| Error::Parse(format!("field {k:?} is not an integer")))
}

fn pos(v: &Value, k: &str) -> Result<usize> {
    usize::try_from(int(v, k)?).map_err(|_| Error::Parse(format!("field {k:?} is negative")))
}

pub fn step_from_json(space: &Arc<Space>, v: &Value) -> Result<Step> {
    let zm = |k: &str| -> Result<ZMap> {
        let d: ZMapDesc = serde_json::from_value(field(v, k)?.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        d.build(Some(space))
    };
    let op = field(v, "op")?.as_str().ok_or(Error::Parse("op is not a string".into()))?;
    Ok(match op {
        "dop" => Step::Dop { at: pos(v, "at")? },
        "insert_opposite" => Step::InsertOpposite { after: pos(v, "after")?, map: zm("map")?, shift: int(v, "shift")? },
        "merge" => Step::Merge { at: pos(v, "at")?, point: int(v, "point")? },
        "split" => Step::Split { at: pos(v, "at")?, point: int(v, "point")? },
        "point" => {
            let m = field(v, "move")?;
            let kind = field(m, "op")?.as_str().unwrap_or_default();
            let mv = match kind {
                "add" => {
                    let label: LabelDesc = serde_json::from_value(field(m, "value")?.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                    crate::zmap::PointMove::Add { at: int(m, "at")?, value: value_in(space, &label)? }
                }
                "delete" => crate::zmap::PointMove::Delete { at: int(m, "at")? },
                other => return Err(Error::Parse(format!("unknown point move {other:?}"))),
            };
            Step::Point { map: pos(v, "map")?, mv }
        }
        "shift" => Step::Shift { map: pos(v, "map")?, by: int(v, "by")? },
        "cut" => Step::Cut { at: pos(v, "at")? },
        "uncut" => Step::Uncut { at: pos(v, "at")?, first: zm("first")?, second: zm("second")? },
        "hstep" => Step::Hstep {
            map: pos(v, "map")?,
            lo: int(v, "lo")?,
            rows: serde_json::from_value(field(v, "rows")?.clone()).map_err(|e| Error::Parse(e.to_string()))?,
        },
        other => return Err(Error::Parse(format!("unknown step {other:?}"))),
    })
}

pub fn trace_json(space: &Space, t: &Trace) -> Value {
    Value::Array(t.steps.iter().map(|s| step_json(space, s)).collect())
}

pub fn trace_from_json(space: &Arc<Space>, v: &Value) -> Result<Trace> {
    let steps = v.as_array().ok_or(Error::Parse("trace must be an array".into()))?;
    Ok(Trace { steps: steps.iter().map(|s| step_from_json(space, s)).collect::<Result<_>>()? })
}

pub fn evidence_json(space: &Space, e: &Evidence) -> Value {
    match e {
        Evidence::Exact => json!({"kind": "exact"}),
        Evidence::Rows(rows) => {
            let rows: Vec<Vec<LabelDesc>> = rows.iter().map(|r| r.iter().map(|&v| value_out(space, v)).collect()).collect();
            json!({"kind": "rows", "rows": rows})
        }
        Evidence::Ray(c) => {
            let rows: Vec<TailDesc> = c.rows.iter().map(|t| TailDesc::of(space, t)).collect();
            json!({"kind": "ray", "shift": c.shift, "rows": rows})
        }
        Evidence::Moves(ms) => json!({"kind": "moves", "moves": ms}),
        Evidence::Trace(t) => json!({"kind": "trace", "steps": trace_json(space, t)}),
    }
}

pub fn verdict_json(space: &Space, v: &Verdict) -> Value {
    match v {
        Verdict::Proved(e) => json!({"verdict": "PROVED", "evidence": evidence_json(space, e)}),
        Verdict::Refuted(r) => json!({"verdict": "REFUTED", "reason": r}),
        Verdict::Unknown(r) => json!({"verdict": "UNKNOWN", "reason": r}),
    }
}

/// Parses JSON text, reporting the line and column of syntax errors.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

/// Stable pretty-printed JSON.
pub fn to_json_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable report")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::graphs::cycle;

    #[test]
    fn zmap_round_trip() {
        let text = r#"{
            "space": {"kind": "finite", "vertices": [0, 1, 2, 3], "edges": [[0,1],[1,2],[2,3],[3,0]]},
            "window": {"lo": 0, "values": [0, 1, 2, 3, 0]},
            "left_tail": {"kind": "const", "value": 0},
            "right_tail": {"kind": "periodic", "word": [0, 1]}
        }"#;
        let d: ZMapDesc = parse_json(text).unwrap();
        let f = d.build(None).unwrap();
        let again = ZMapDesc::of(&f, true).build(None).unwrap();
        assert_eq!(f, again);
        assert_eq!(ZMapDesc::of(&again, true), ZMapDesc::of(&f, true));
    }

    #[test]
    fn intline_affine() {
        let text = r#"{"space": {"kind": "intline", "scale": "inf"},
            "window": {"lo": 0, "values": []},
            "left_tail": {"kind": "affine", "slope": -2, "offset": 0, "corr": [0]},
            "right_tail": {"kind": "affine", "slope": 2, "offset": 0, "corr": [0]}}"#;
        let f = parse_json::<ZMapDesc>(text).unwrap().build(None).unwrap();
        assert_eq!(f.eval(-3), 6);
        assert!(f.is_symmetric());
    }

    #[test]
    fn unknown_vertex_is_a_validation_failure() {
        let d = SpaceDesc::Finite { vertices: vec![LabelDesc::Int(0)], edges: vec![(LabelDesc::Int(0), LabelDesc::Int(9))] };
        assert_eq!(d.build().unwrap_err(), Error::UnknownVertex("9".into()));
        assert!(matches!(parse_json::<SpaceDesc>("{\"kind\": "), Err(Error::Parse(_))));
    }

    #[test]
    fn trace_round_trip() {
        let space = Arc::new(Space::Finite(cycle(4)));
        let f = ZMap::from_path(space.clone(), 0, &[0, 1, 2, 3, 0]).unwrap();
        let t = Trace {
            steps: vec![
                Step::Merge { at: 1, point: 4 },
                Step::Point { map: 1, mv: crate::zmap::PointMove::Add { at: 2, value: 3 } },
                Step::InsertOpposite { after: 0, map: f, shift: 2 },
            ],
        };
        let v = trace_json(&space, &t);
        assert_eq!(trace_from_json(&space, &v).unwrap(), t);
    }
}
