//! JSON map literals and representation files.
//!
//! ```text
//! {"type":"rotation","theta":t}
//! {"type":"pl","breaks":[[x0,y0],...]}
//! {"type":"moebius","m":[a,b,c,d],"winding":k}
//! {"generators":{"a":<map>,...},"relators":["a b A B", ...]}
//! ```
//!
//! Numbers written as strings (`"1/3"`, `"0.25"`) or as JSON integers are
//! read exactly. A PL map whose coordinates are all exact keeps an exact
//! rational twin; otherwise it falls back to floating point.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::rep::GroupRepresentation;
use super::scalar::parse_rational;
use super::word::Word;
use super::LiftedCircleMap;
use crate::error::{Error, Result};

enum Num {
    Exact(BigRational),
    Float(f64),
}

impl Num {
    fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => super::scalar::Scalar::to_f64(r),
            Num::Float(v) => *v,
        }
    }
}

fn number(v: &Value, what: &str) -> Result<Num> {
    match v {
        Value::String(s) => parse_rational(s)
            .map(Num::Exact)
            .ok_or_else(|| Error::Parse(format!("{what}: cannot read `{s}` as a rational"))),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Num::Exact(BigRational::from_integer(i.into())))
            } else {
                n.as_f64()
                    .filter(|f| f.is_finite())
                    .map(Num::Float)
                    .ok_or_else(|| Error::Parse(format!("{what}: not a finite number")))
            }
        }
        _ => Err(Error::Parse(format!("{what}: expected a number"))),
    }
}

pub fn parse_map(v: &Value) -> Result<LiftedCircleMap> {
    let ty = v
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("map literal needs a string `type`".into()))?;
    match ty {
        "rotation" => {
            let theta = v.get("theta").ok_or_else(|| Error::Parse("rotation needs `theta`".into()))?;
            Ok(match number(theta, "theta")? {
                Num::Exact(r) => LiftedCircleMap::rotation_exact(r),
                Num::Float(t) => LiftedCircleMap::rotation(t),
            })
        }
        "pl" => {
            let breaks = v
                .get("breaks")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("pl needs a `breaks` array".into()))?;
            let mut pts = Vec::with_capacity(breaks.len());
            for b in breaks {
                let pair = b
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Parse("each breakpoint is an [x, y] pair".into()))?;
                pts.push((number(&pair[0], "x")?, number(&pair[1], "y")?));
            }
            if pts.is_empty() {
                return Err(Error::InvalidMap("a PL map needs at least one breakpoint".into()));
            }
            let all_exact = pts.iter().all(|(x, y)| matches!((x, y), (Num::Exact(_), Num::Exact(_))));
            if all_exact {
                let exact = pts
                    .into_iter()
                    .map(|(x, y)| match (x, y) {
                        (Num::Exact(x), Num::Exact(y)) => (x, y),
                        _ => unreachable!(),
                    })
                    .collect();
                LiftedCircleMap::pl_exact(exact)
            } else {
                LiftedCircleMap::pl(pts.iter().map(|(x, y)| (x.to_f64(), y.to_f64())).collect())
            }
        }
        "moebius" => {
            let m = v
                .get("m")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 4)
                .ok_or_else(|| Error::Parse("moebius needs `m` with four entries".into()))?;
            let mut e = [0.0; 4];
            for (slot, x) in e.iter_mut().zip(m) {
                *slot = number(x, "m")?.to_f64();
            }
            let det = e[0] * e[3] - e[1] * e[2];
            if !(det > 0.0) {
                return Err(Error::InvalidMap(format!("moebius matrix has determinant {det}, need > 0")));
            }
            let winding = match v.get("winding") {
                None => 0,
                Some(w) => w.as_i64().ok_or_else(|| Error::Parse("winding must be an integer".into()))?,
            };
            Ok(LiftedCircleMap::projective(e, winding))
        }
        other => Err(Error::Parse(format!("unknown map type `{other}`"))),
    }
}

pub fn map_to_json(f: &LiftedCircleMap) -> Result<Value> {
    Ok(match f {
        LiftedCircleMap::Rotation(r) => match r.exact() {
            Some(e) => json!({"type": "rotation", "theta": e.to_string()}),
            None => json!({"type": "rotation", "theta": r.theta()}),
        },
        LiftedCircleMap::PiecewiseLinear(p) => match p.exact() {
            Some(e) => {
                let b: Vec<Value> =
                    e.breaks().iter().map(|(x, y)| json!([x.to_string(), y.to_string()])).collect();
                json!({"type": "pl", "breaks": b})
            }
            None => {
                let b: Vec<Value> = p.float().breaks().iter().map(|(x, y)| json!([x, y])).collect();
                json!({"type": "pl", "breaks": b})
            }
        },
        LiftedCircleMap::Projective(p) => {
            json!({"type": "moebius", "m": p.matrix().to_vec(), "winding": p.winding()})
        }
        LiftedCircleMap::SampledSmooth(_) => {
            return Err(Error::Unsupported("sampled-smooth maps have no literal form".into()))
        }
    })
}

pub fn parse_rep(v: &Value) -> Result<GroupRepresentation> {
    let gens = v
        .get("generators")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("representation needs a `generators` object".into()))?;
    let mut map = BTreeMap::new();
    for (name, lit) in gens {
        map.insert(name.clone(), parse_map(lit)?);
    }
    let relators = match v.get("relators") {
        None => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .map(|r| {
                r.as_str()
                    .ok_or_else(|| Error::Parse("relators are strings".into()))
                    .and_then(Word::parse)
            })
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(Error::Parse("`relators` must be an array".into())),
    };
    GroupRepresentation::new(map, relators)
}

pub fn rep_to_json(rep: &GroupRepresentation) -> Result<Value> {
    let mut gens = serde_json::Map::new();
    for (name, f) in rep.generators() {
        gens.insert(name.clone(), map_to_json(f)?);
    }
    let relators: Vec<String> = rep.relators().iter().map(|w| w.to_string()).collect();
    Ok(json!({"generators": gens, "relators": relators}))
}

pub fn read_map(path: &Path) -> Result<LiftedCircleMap> {
    let text = std::fs::read_to_string(path)?;
    parse_map(&serde_json::from_str(&text)?)
}

pub fn read_rep(path: &Path) -> Result<GroupRepresentation> {
    let text = std::fs::read_to_string(path)?;
    parse_rep(&serde_json::from_str(&text)?)
}
