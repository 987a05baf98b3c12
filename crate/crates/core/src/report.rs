//! Structured outcomes of checks.

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A counterexample: named components of the failing instance, in the order
/// they were recorded.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub fields: Vec<(String, String)>,
}

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    pub fn with(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn millis<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
    match d {
        Some(d) => s.serialize_some(&(d.as_secs_f64() * 1000.0)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub item: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub instances_checked: u64,
    /// Wall-clock time; cleared when byte-stable output is wanted.
    #[serde(rename = "elapsed_ms", serialize_with = "millis")]
    pub elapsed: Option<Duration>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Combines two reports. Verdicts conjoin, counts and times add, and the
    /// leftmost witness wins, so the operation is associative.
    pub fn merge(self, other: Report) -> Report {
        let verdict =
            if self.passed() && other.passed() { Verdict::Pass } else { Verdict::Fail };
        let item = if self.item.is_empty() {
            other.item
        } else if other.item.is_empty() {
            self.item
        } else {
            format!("{}, {}", self.item, other.item)
        };
        let elapsed = match (self.elapsed, other.elapsed) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.or(b),
        };
        let mut notes = self.notes;
        notes.extend(other.notes);
        Report {
            item,
            verdict,
            witness: self.witness.or(other.witness),
            instances_checked: self.instances_checked + other.instances_checked,
            elapsed,
            notes,
        }
    }

    pub fn without_timing(mut self) -> Report {
        self.elapsed = None;
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} ({} instances", self.item, self.instances_checked)?;
        if let Some(d) = self.elapsed {
            write!(f, ", {:.3}s", d.as_secs_f64())?;
        }
        writeln!(f, ")")?;
        if let Some(w) = &self.witness {
            for (k, v) in &w.fields {
                writeln!(f, "  {k}: {v}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Accumulates instances for one check and stops at the first failure.
pub(crate) struct Tally {
    item: String,
    instances: u64,
    witness: Option<Witness>,
    notes: Vec<String>,
    start: Instant,
}

impl Tally {
    pub(crate) fn new(item: impl Into<String>) -> Self {
        Tally {
            item: item.into(),
            instances: 0,
            witness: None,
            notes: Vec::new(),
            start: Instant::now(),
        }
    }

    pub(crate) fn tick(&mut self) {
        self.instances += 1;
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Records `w` unless a failure is already recorded.
    pub(crate) fn fail(&mut self, w: Witness) {
        if self.witness.is_none() {
            self.witness = Some(w);
        }
    }

    /// Folds a sub-check into this tally.
    pub(crate) fn absorb(&mut self, r: Report) {
        self.instances += r.instances_checked;
        if !r.passed() {
            self.fail(r.witness.unwrap_or_else(|| Witness::new().with("item", r.item)));
        }
    }

    pub(crate) fn failed(&self) -> bool {
        self.witness.is_some()
    }

    /// Records a failure when `ok` is false; returns `ok`.
    pub(crate) fn expect(&mut self, ok: bool, w: impl FnOnce() -> Witness) -> bool {
        self.tick();
        if !ok {
            self.fail(w());
        }
        ok
    }

    pub(crate) fn finish(self) -> Report {
        Report {
            item: self.item,
            verdict: if self.witness.is_some() { Verdict::Fail } else { Verdict::Pass },
            witness: self.witness,
            instances_checked: self.instances,
            elapsed: Some(self.start.elapsed()),
            notes: self.notes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(item: &str, ok: bool, n: u64) -> Report {
        Report {
            item: item.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            witness: (!ok).then(|| Witness::new().with("item", item)),
            instances_checked: n,
            elapsed: None,
            notes: vec![item.to_string()],
        }
    }

    #[test]
    fn merge_is_associative() {
        let (a, b, c) = (report("a", true, 1), report("b", false, 2), report("c", false, 3));
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.merge(b.merge(c));
        assert_eq!(left, right);
        assert_eq!(left.witness.unwrap().get("item"), Some("b"));
        assert_eq!(left.instances_checked, 6);
    }

    #[test]
    fn tally_keeps_first_failure() {
        let mut t = Tally::new("x");
        t.expect(true, Witness::new);
        t.expect(false, || Witness::new().with("n", 1));
        t.expect(false, || Witness::new().with("n", 2));
        let r = t.finish();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witness.unwrap().get("n"), Some("1"));
        assert_eq!(r.instances_checked, 3);
    }
}
