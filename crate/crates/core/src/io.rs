//! JSON encodings of instances and schedules.
//!
//! Rationals are written as `{"num": int, "den": int}` in lowest terms, with
//! integers of any size. Items are numbered from 1 in every file.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::affine::AffineFunction;
use crate::model::{Instance, InstanceError, Item};
use crate::parametric::{InnerMode, ScheduleEntry, ScheduleError, SolutionSchedule};
use crate::piecewise::{Interval, IntervalKind};
use crate::rational::{Epsilon, EpsilonError, Rational};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("epsilon: {0}")]
    Epsilon(#[from] EpsilonError),
    #[error("schedule was computed for {schedule} items but the instance has {instance}")]
    ItemCount { schedule: usize, instance: usize },
}

impl From<serde_json::Error> for IoError {
    fn from(err: serde_json::Error) -> Self {
        let (line, column) = (err.line(), err.column());
        let full = err.to_string();
        let suffix = format!(" at line {line} column {column}");
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_owned();
        IoError::Syntax { line, column, message }
    }
}

/// Location inside a document, rendered like `intervals[3].lo`.
#[derive(Clone)]
struct Path(String);

impl Path {
    fn root() -> Self {
        Path(String::new())
    }

    fn key(&self, key: &str) -> Self {
        if self.0.is_empty() {
            Path(key.to_owned())
        } else {
            Path(format!("{}.{key}", self.0))
        }
    }

    fn index(&self, i: usize) -> Self {
        Path(format!("{}[{i}]", self.0))
    }

    fn err(&self, message: impl Into<String>) -> IoError {
        let path = if self.0.is_empty() {
            "document".to_owned()
        } else {
            self.0.clone()
        };
        IoError::Field {
            path,
            message: message.into(),
        }
    }
}

fn object<'a>(value: &'a Value, path: &Path) -> Result<&'a Map<String, Value>, IoError> {
    value.as_object().ok_or_else(|| path.err("expected an object"))
}

fn field<'a>(map: &'a Map<String, Value>, key: &str, path: &Path) -> Result<(&'a Value, Path), IoError> {
    let inner = path.key(key);
    map.get(key)
        .map(|v| (v, inner.clone()))
        .ok_or_else(|| inner.err("missing field"))
}

fn array<'a>(value: &'a Value, path: &Path) -> Result<&'a Vec<Value>, IoError> {
    value.as_array().ok_or_else(|| path.err("expected an array"))
}

fn big_int(value: &Value, path: &Path) -> Result<BigInt, IoError> {
    match value {
        Value::Number(n) => {
            let text = n.to_string();
            text.parse::<BigInt>()
                .map_err(|_| path.err(format!("expected an integer, got {text}")))
        }
        other => Err(path.err(format!("expected an integer, got {other}"))),
    }
}

fn u64_field(value: &Value, path: &Path) -> Result<u64, IoError> {
    let n = big_int(value, path)?;
    u64::try_from(&n).map_err(|_| path.err(format!("{n} is outside 0..=18446744073709551615")))
}

fn i64_field(value: &Value, path: &Path) -> Result<i64, IoError> {
    let n = big_int(value, path)?;
    i64::try_from(&n).map_err(|_| path.err(format!("{n} does not fit a 64-bit signed integer")))
}

fn int_value(n: &BigInt) -> Value {
    Value::Number(
        n.to_string()
            .parse::<Number>()
            .expect("decimal integers are valid JSON numbers"),
    )
}

pub fn rational_to_json(value: &Rational) -> Value {
    json!({ "num": int_value(value.numer()), "den": int_value(value.denom()) })
}

fn rational_at(value: &Value, path: &Path) -> Result<Rational, IoError> {
    let map = object(value, path)?;
    let (num, num_path) = field(map, "num", path)?;
    let (den, den_path) = field(map, "den", path)?;
    let num = big_int(num, &num_path)?;
    let den = big_int(den, &den_path)?;
    if den.is_zero() {
        return Err(den_path.err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Reads a `{"num", "den"}` object; the fraction need not be reduced.
pub fn rational_from_json(value: &Value) -> Result<Rational, IoError> {
    rational_at(value, &Path::root())
}

/// Parses a standalone rational document such as `{"num": 3, "den": 4}`.
pub fn parse_rational_json(text: &str) -> Result<Rational, IoError> {
    rational_from_json(&serde_json::from_str(text)?)
}

pub fn instance_to_value(inst: &Instance) -> Value {
    let items: Vec<Value> = inst
        .items()
        .iter()
        .map(|i| json!({ "w": i.weight, "a": i.intercept, "b": i.slope }))
        .collect();
    json!({ "capacity": inst.capacity(), "items": items })
}

pub fn instance_to_json(inst: &Instance) -> String {
    let mut text = serde_json::to_string_pretty(&instance_to_value(inst)).expect("values serialize");
    text.push('\n');
    text
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let doc: Value = serde_json::from_str(text)?;
    let root = Path::root();
    let map = object(&doc, &root)?;
    let (capacity, cap_path) = field(map, "capacity", &root)?;
    let capacity = u64_field(capacity, &cap_path)?;
    let (items, items_path) = field(map, "items", &root)?;
    let items = array(items, &items_path)?
        .iter()
        .enumerate()
        .map(|(k, value)| {
            let path = items_path.index(k);
            let map = object(value, &path)?;
            let (w, wp) = field(map, "w", &path)?;
            let (a, ap) = field(map, "a", &path)?;
            let (b, bp) = field(map, "b", &path)?;
            Ok(Item::new(u64_field(w, &wp)?, i64_field(a, &ap)?, i64_field(b, &bp)?))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(Instance::new(capacity, items)?)
}

fn bound_to_json(bound: Option<&Rational>, infinity: &str) -> Value {
    bound.map_or_else(|| Value::String(infinity.to_owned()), rational_to_json)
}

fn bound_at(value: &Value, infinity: &str, path: &Path) -> Result<Option<Rational>, IoError> {
    match value {
        Value::String(s) if s == infinity => Ok(None),
        Value::String(s) => Err(path.err(format!("expected a rational or \"{infinity}\", got \"{s}\""))),
        other => rational_at(other, path).map(Some),
    }
}

pub fn schedule_to_value(schedule: &SolutionSchedule) -> Value {
    let eps = schedule.epsilon();
    let intervals: Vec<Value> = schedule
        .entries()
        .iter()
        .map(|entry| {
            let line = entry.solution.profit_line();
            json!({
                "lo": bound_to_json(entry.interval.lower(), "-inf"),
                "hi": bound_to_json(entry.interval.upper(), "+inf"),
                "kind": entry.interval.kind().as_str(),
                "items": entry.solution.item_numbers(),
                "profit": { "alpha": rational_to_json(&line.intercept), "beta": rational_to_json(&line.slope) },
            })
        })
        .collect();
    let mut doc = json!({
        "epsilon": { "num": eps.num(), "den": eps.den() },
        "intervals": intervals,
    });
    if let Some(meta) = schedule.meta() {
        doc["meta"] = json!({
            "items": meta.items,
            "mode": meta.mode.as_str(),
            "phi_pieces": meta.phi_pieces,
            "criticals": meta.criticals,
        });
    }
    doc
}

/// Pretty-printed schedule. Wall time is left out so the output depends
/// only on the instance, ε and mode.
pub fn schedule_to_json(schedule: &SolutionSchedule) -> String {
    let mut text = serde_json::to_string_pretty(&schedule_to_value(schedule)).expect("values serialize");
    text.push('\n');
    text
}

/// A schedule read back from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSchedule {
    pub schedule: SolutionSchedule,
    pub mode: Option<InnerMode>,
    /// 1-based interval numbers whose stored profit differs from the sum
    /// over their items.
    pub profit_mismatches: Vec<usize>,
}

/// Parses a schedule and binds its item lists to `inst`.
///
/// Item numbers must exist in `inst` and each selection must fit its
/// capacity. Stored profit lines are compared with the instance but a
/// mismatch is reported rather than rejected.
pub fn parse_schedule(text: &str, inst: &Instance) -> Result<ParsedSchedule, IoError> {
    let doc: Value = serde_json::from_str(text)?;
    let root = Path::root();
    let map = object(&doc, &root)?;

    let (eps, eps_path) = field(map, "epsilon", &root)?;
    let eps_map = object(eps, &eps_path)?;
    let (num, num_path) = field(eps_map, "num", &eps_path)?;
    let (den, den_path) = field(eps_map, "den", &eps_path)?;
    let epsilon = Epsilon::new(u64_field(num, &num_path)?, u64_field(den, &den_path)?)?;

    let mut mode = None;
    if let Some(meta) = map.get("meta") {
        let meta_path = root.key("meta");
        let meta = object(meta, &meta_path)?;
        if let Some(items) = meta.get("items") {
            let declared = u64_field(items, &meta_path.key("items"))?;
            if declared != inst.len() as u64 {
                return Err(IoError::ItemCount {
                    schedule: usize::try_from(declared).unwrap_or(usize::MAX),
                    instance: inst.len(),
                });
            }
        }
        if let Some(m) = meta.get("mode") {
            let mode_path = meta_path.key("mode");
            let m = m.as_str().ok_or_else(|| mode_path.err("expected a string"))?;
            mode = Some(m.parse::<InnerMode>().map_err(|e| mode_path.err(e))?);
        }
    }

    let (intervals, intervals_path) = field(map, "intervals", &root)?;
    let mut entries = Vec::new();
    let mut profit_mismatches = Vec::new();
    for (k, value) in array(intervals, &intervals_path)?.iter().enumerate() {
        let path = intervals_path.index(k);
        let iv = object(value, &path)?;
        let (lo, lo_path) = field(iv, "lo", &path)?;
        let (hi, hi_path) = field(iv, "hi", &path)?;
        let (kind, kind_path) = field(iv, "kind", &path)?;
        let kind = kind
            .as_str()
            .and_then(IntervalKind::parse)
            .ok_or_else(|| kind_path.err(format!("unknown interval kind {kind}")))?;
        let interval = Interval::from_parts(bound_at(lo, "-inf", &lo_path)?, bound_at(hi, "+inf", &hi_path)?, kind)
            .map_err(|e| path.err(e.to_string()))?;

        let (items, items_path) = field(iv, "items", &path)?;
        let mut selected = Vec::new();
        for (j, item) in array(items, &items_path)?.iter().enumerate() {
            let item_path = items_path.index(j);
            let number = u64_field(item, &item_path)?;
            if number == 0 || number > inst.len() as u64 {
                return Err(IoError::ItemCount {
                    schedule: usize::try_from(number).unwrap_or(usize::MAX),
                    instance: inst.len(),
                });
            }
            selected.push(number as usize - 1);
        }
        let solution = inst
            .solution(selected)
            .ok_or_else(|| items_path.err("selection exceeds the capacity"))?;

        let (profit, profit_path) = field(iv, "profit", &path)?;
        let profit_map = object(profit, &profit_path)?;
        let (alpha, alpha_path) = field(profit_map, "alpha", &profit_path)?;
        let (beta, beta_path) = field(profit_map, "beta", &profit_path)?;
        let stored = AffineFunction::new(rational_at(alpha, &alpha_path)?, rational_at(beta, &beta_path)?);
        if &stored != solution.profit_line() {
            profit_mismatches.push(k + 1);
        }
        entries.push(ScheduleEntry { interval, solution });
    }
    Ok(ParsedSchedule {
        schedule: SolutionSchedule::new(epsilon, entries)?,
        mode,
        profit_mismatches,
    })
}

/// Renders a rational as `n` or `n/d`, the form accepted on the command line.
pub fn rational_to_string(value: &Rational) -> String {
    if value.denom() == &BigInt::from(1) {
        value.numer().to_string()
    } else if value.is_negative() {
        format!("-{}/{}", value.numer().abs(), value.denom())
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::solve_parametric;
    use proptest::prelude::*;

    const TWO_ITEMS: &str = r#"{"capacity": 1, "items": [{"w": 1, "a": 2, "b": 0}, {"w": 1, "a": 1, "b": 1}]}"#;

    #[test]
    fn reads_instance() {
        let inst = parse_instance(TWO_ITEMS).unwrap();
        assert_eq!(inst.capacity(), 1);
        assert_eq!(inst.items(), &[Item::new(1, 2, 0), Item::new(1, 1, 1)]);
        assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
    }

    #[test]
    fn instance_errors_name_the_spot() {
        let err = parse_instance(r#"{"capacity": 1, "items": [{"w": 1, "a": 2}]}"#).unwrap_err();
        assert_eq!(err.to_string(), "items[0].b: missing field");
        let err = parse_instance(r#"{"capacity": -1, "items": []}"#).unwrap_err();
        assert!(err.to_string().starts_with("capacity: "), "{err}");
        let err = parse_instance(r#"{"capacity": 1, "items": [{"w": 1, "a": 1.5, "b": 0}]}"#).unwrap_err();
        assert!(err.to_string().starts_with("items[0].a: expected an integer"), "{err}");
        let err = parse_instance("{\n  \"capacity\": 1,\n  \"items\": [\n}").unwrap_err();
        assert!(matches!(err, IoError::Syntax { line: 4, .. }), "{err}");
        let err = parse_instance(r#"{"capacity": 1, "items": [{"w": 2, "a": 0, "b": 0}]}"#).unwrap_err();
        assert!(matches!(
            err,
            IoError::Instance(InstanceError::WeightExceedsCapacity { .. })
        ));
    }

    #[test]
    fn big_rationals_survive() {
        let big = Rational::new(BigInt::from(10).pow(40) + 1, BigInt::from(3).pow(30));
        assert_eq!(rational_from_json(&rational_to_json(&big)).unwrap(), big);
        let text = serde_json::to_string(&rational_to_json(&-big.clone())).unwrap();
        assert_eq!(parse_rational_json(&text).unwrap(), -big);
        assert_eq!(parse_rational_json(r#"{"num": 4, "den": -6}"#).unwrap(), ratio(-2, 3));
        assert!(parse_rational_json(r#"{"num": 4, "den": 0}"#).is_err());
    }

    #[test]
    fn schedule_round_trip() {
        let inst = parse_instance(TWO_ITEMS).unwrap();
        let eps = Epsilon::new(1, 4).unwrap();
        let schedule = solve_parametric(&inst, eps, InnerMode::Exact).unwrap();
        let text = schedule_to_json(&schedule);
        let parsed = parse_schedule(&text, &inst).unwrap();
        assert_eq!(parsed.schedule.entries(), schedule.entries());
        assert_eq!(parsed.schedule.epsilon(), eps);
        assert_eq!(parsed.mode, Some(InnerMode::Exact));
        assert!(parsed.profit_mismatches.is_empty());
        assert_eq!(schedule_to_json(&parsed.schedule).lines().next(), text.lines().next());
    }

    #[test]
    fn schedule_mismatches() {
        let inst = parse_instance(TWO_ITEMS).unwrap();
        let schedule = solve_parametric(&inst, Epsilon::new(1, 4).unwrap(), InnerMode::Exact).unwrap();
        let mut doc = schedule_to_value(&schedule);

        let mut tampered = doc.clone();
        tampered["intervals"][0]["items"] = json!([]);
        let parsed = parse_schedule(&tampered.to_string(), &inst).unwrap();
        assert_eq!(parsed.profit_mismatches, vec![1]);

        doc["meta"]["items"] = json!(3);
        let err = parse_schedule(&doc.to_string(), &inst).unwrap_err();
        assert_eq!(
            err.to_string(),
            "schedule was computed for 3 items but the instance has 2"
        );

        let mut doc = schedule_to_value(&schedule);
        doc["intervals"][0]["items"] = json!([1, 2]);
        let err = parse_schedule(&doc.to_string(), &inst).unwrap_err();
        assert_eq!(err.to_string(), "intervals[0].items: selection exceeds the capacity");

        let mut doc = schedule_to_value(&schedule);
        doc["intervals"][0]["items"] = json!([5]);
        assert!(matches!(
            parse_schedule(&doc.to_string(), &inst),
            Err(IoError::ItemCount { .. })
        ));

        let mut doc = schedule_to_value(&schedule);
        doc["intervals"].as_array_mut().unwrap().remove(1);
        assert!(matches!(
            parse_schedule(&doc.to_string(), &inst),
            Err(IoError::Schedule(_))
        ));

        let mut doc = schedule_to_value(&schedule);
        doc["epsilon"] = json!({"num": 1, "den": 1});
        assert!(matches!(
            parse_schedule(&doc.to_string(), &inst),
            Err(IoError::Epsilon(_))
        ));
    }

    #[test]
    fn whole_line_schedule() {
        let text = r#"{"epsilon": {"num": 1, "den": 2}, "intervals": [
            {"lo": "-inf", "hi": "+inf", "kind": "whole_line", "items": [],
             "profit": {"alpha": {"num": 0, "den": 1}, "beta": {"num": 0, "den": 1}}}]}"#;
        let inst = parse_instance(TWO_ITEMS).unwrap();
        let parsed = parse_schedule(text, &inst).unwrap();
        assert_eq!(parsed.schedule.len(), 1);
        assert_eq!(parsed.mode, None);
        let bad = text.replace("\"+inf\"", "\"inf\"");
        let err = parse_schedule(&bad, &inst).unwrap_err();
        assert_eq!(
            err.to_string(),
            "intervals[0].hi: expected a rational or \"+inf\", got \"inf\""
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(rational_to_string(&ratio(-3, 4)), "-3/4");
        assert_eq!(rational_to_string(&int(7)), "7");
    }

    proptest! {
        #[test]
        fn instance_json_round_trip(
            items in prop::collection::vec((1u64..1000, any::<i64>(), any::<i64>()), 1..12),
            extra in 0u64..1000,
        ) {
            let capacity = items.iter().map(|i| i.0).max().unwrap() + extra;
            let inst = Instance::new(capacity, items.iter().map(|&(w, a, b)| Item::new(w, a, b)).collect()).unwrap();
            prop_assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
        }

        #[test]
        fn rational_json_round_trip(num in any::<i128>(), den in 1i128..i128::MAX) {
            let r = Rational::new(BigInt::from(num), BigInt::from(den));
            prop_assert_eq!(rational_from_json(&rational_to_json(&r)).unwrap(), r);
        }
    }
}
