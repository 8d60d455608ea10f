//! Vertex identifiers.

use std::fmt;

/// A vertex name. Integers sort before strings; constructed spaces use the
/// pair and tagged forms so that names stay unique and ordered.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Int(i64),
    Name(String),
    Pair(Box<Label>, Box<Label>),
    Tagged(usize, Box<Label>),
}

impl Label {
    pub fn name(s: &str) -> Label {
        Label::Name(s.to_string())
    }

    pub fn pair(a: Label, b: Label) -> Label {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn tagged(tag: usize, l: Label) -> Label {
        Label::Tagged(tag, Box::new(l))
    }
}

impl From<i64> for Label {
    fn from(v: i64) -> Self {
        Label::Int(v)
    }
}

impl From<&str> for Label {
    fn from(v: &str) -> Self {
        Label::Name(v.to_string())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(v) => write!(f, "{v}"),
            Label::Name(s) => write!(f, "{s}"),
            Label::Pair(a, b) => write!(f, "({a},{b})"),
            Label::Tagged(t, l) => write!(f, "{t}:{l}"),
        }
    }
}
