//! Two-process ε-agreement with two bits per shared-memory entry.
//!
//! Each process keeps an integer state `s`, writes only its parity code, and
//! after `r` rounds decides `(2s + i) / 3^r`. The states reachable after `r`
//! rounds form a path of `3^r` edges running from `(0, p0)` to
//! `((3^r - 1)/2, p1)`.

use std::collections::BTreeSet;
use std::sync::Mutex;

use num_rational::Ratio;

use crate::complex::{ChromaticComplex, Color, Vertex, VertexId};
use crate::error::{Error, Result};
use crate::iso::chromatic_iso;
use crate::protocol::{run_round, TraceLine, View};
use crate::subdivision::{iterate_subdivide, Limits};

pub fn aa_encode(s: u64) -> u32 {
    2 - (s % 2) as u32
}

/// What a process observed in the partner's slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Reading {
    Solo,
    SameParity,
    OtherParity,
}

impl Reading {
    pub fn classify(m: Option<u32>, s: u64) -> Reading {
        match m {
            None => Reading::Solo,
            Some(m) if m == aa_encode(s) => Reading::SameParity,
            Some(_) => Reading::OtherParity,
        }
    }
}

/// Next state as `3s + offset[i][reading]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transitions {
    /// Indexed by process, then by `Solo`, `SameParity`, `OtherParity`.
    pub offset: [[i64; 3]; 2],
}

impl Default for Transitions {
    fn default() -> Self {
        // 3s+i, 3s+(1-i), 3s-1+3i
        Transitions {
            offset: [[0, 1, -1], [1, 0, 2]],
        }
    }
}

impl Transitions {
    pub fn next(&self, i: u32, m: Option<u32>, s: u64) -> Result<u64> {
        if i > 1 {
            return Err(Error::InvalidArgument(format!("process index {i}")));
        }
        let reading = Reading::classify(m, s);
        let off = self.offset[i as usize][reading as usize];
        let value = 3 * s as i128 + off as i128;
        u64::try_from(value)
            .map_err(|_| Error::Unreachable(format!("p{i} in state {s} reading {m:?} would move to {value}")))
    }
}

pub fn aa_next_state(i: u32, m: Option<u32>, s: u64) -> Result<u64> {
    Transitions::default().next(i, m, s)
}

pub fn eps_edges(r: u32) -> u64 {
    3u64.pow(r)
}

pub fn aa_decide(i: u32, s: u64, r: u32) -> Ratio<u64> {
    Ratio::new(2 * s + i as u64, eps_edges(r))
}

/// The input edge: `p0` with input 0 and `p1` with input 1, both in state 0.
pub fn input_edge() -> ChromaticComplex {
    ChromaticComplex::new(
        2,
        vec![Vertex::new(0, 0, "0"), Vertex::new(1, 1, "0")],
        vec![crate::complex::Simplex::new([(Color(0), VertexId(0)), (Color(1), VertexId(1))]).expect("edge")],
    )
    .expect("input edge")
}

#[derive(Clone, Debug)]
pub struct AgreementRun {
    pub complex: ChromaticComplex,
    /// `states[v]` is the state of vertex `v` of `complex`.
    pub states: Vec<u64>,
    /// Every value found in a partner slot, `None` for ⊥.
    pub alphabet: BTreeSet<Option<u32>>,
    pub trace: Vec<TraceLine>,
}

/// `r` rounds of the protocol under `t`, over every schedule.
pub fn run_protocol(r: u32, t: &Transitions, limits: &Limits, trace: bool) -> Result<AgreementRun> {
    let mut pc = input_edge();
    let mut states = vec![0u64; 2];
    let alphabet = Mutex::new(BTreeSet::new());
    let mut lines = Vec::new();
    for round in 0..r as usize {
        let cur = &states;
        let out = run_round(
            &pc,
            round,
            limits,
            trace,
            |v| Ok(aa_encode(cur[v.index()])),
            |v, view: &View<u32>| {
                let i = pc.color_of(v).ok_or(Error::UnknownVertex(v))?.0;
                let partner = view.get(Color(1 - i)).copied();
                alphabet.lock().expect("alphabet").insert(partner);
                t.next(i, partner, cur[v.index()])
            },
            |c, s| format!("({s}, p{c})"),
        )?;
        pc = out.complex;
        states = out.states;
        lines.extend(out.trace);
    }
    Ok(AgreementRun {
        complex: pc,
        states,
        alphabet: alphabet.into_inner().expect("alphabet"),
        trace: lines,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct AgreementReport {
    pub rounds: u32,
    pub checks: Vec<Check>,
    pub run: Option<AgreementRun>,
}

impl AgreementReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn solo_state(t: &Transitions, i: u32, r: u32) -> Result<u64> {
    (0..r).try_fold(0u64, |s, _| t.next(i, None, s))
}

/// Path, endpoint, agreement, validity and alphabet checks for the given
/// transition table.
pub fn check_protocol(r: u32, t: &Transitions, limits: &Limits, trace: bool) -> Result<AgreementReport> {
    if r == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    let run = match run_protocol(r, t, limits, trace) {
        Ok(run) => run,
        Err(e @ Error::Unreachable(_)) => {
            return Ok(AgreementReport {
                rounds: r,
                checks: vec![Check {
                    name: "transitions",
                    pass: false,
                    detail: e.to_string(),
                }],
                run: None,
            })
        }
        Err(e) => return Err(e),
    };
    let c = &run.complex;
    let edges = eps_edges(r);
    let state_of = |v: VertexId| run.states[v.index()];
    let color_of = |v: VertexId| c.color_of(v).expect("vertex").0;
    let mut checks = Vec::new();

    let ends: Vec<VertexId> = c.vertex_ids().filter(|&v| c.degree(v) == 1).collect();
    let is_path = c.facets().len() as u64 == edges
        && c.dim() == 1
        && c.facets().iter().all(|f| f.len() == 2)
        && c.vertices().len() as u64 == edges + 1
        && c.vertex_ids().all(|v| c.degree(v) <= 2)
        && ends.len() == 2
        && connected(c);
    checks.push(Check {
        name: "path",
        pass: is_path,
        detail: format!(
            "{} edges, {} vertices, expected a path of {edges} edges",
            c.facets().len(),
            c.vertices().len()
        ),
    });

    let mut end_states: Vec<(u64, u32)> = ends.iter().map(|&v| (state_of(v), color_of(v))).collect();
    end_states.sort_by_key(|&(_, i)| i);
    let expected_ends = vec![(0, 0), ((edges - 1) / 2, 1)];
    checks.push(Check {
        name: "endpoints",
        pass: end_states == expected_ends,
        detail: format!("endpoints {end_states:?}, expected {expected_ends:?}"),
    });

    let step = Ratio::new(1, edges);
    let mut worst = Ratio::from_integer(0u64);
    let mut offsets_ok = true;
    for f in c.facets() {
        let pairs: Vec<(u32, u64)> = f.vertices().map(|v| (color_of(v), state_of(v))).collect();
        if pairs.len() != 2 {
            continue;
        }
        let d0 = aa_decide(pairs[0].0, pairs[0].1, r);
        let d1 = aa_decide(pairs[1].0, pairs[1].1, r);
        let gap = if d0 > d1 { d0 - d1 } else { d1 - d0 };
        worst = worst.max(gap);
        let (s0, s1) = if pairs[0].0 == 0 {
            (pairs[0].1, pairs[1].1)
        } else {
            (pairs[1].1, pairs[0].1)
        };
        offsets_ok &= s0 == s1 || s0 == s1 + 1;
    }
    checks.push(Check {
        name: "agreement",
        pass: worst <= step && !c.facets().is_empty(),
        detail: format!("largest decision gap on an edge {worst}, allowed {step}"),
    });
    checks.push(Check {
        name: "state offsets",
        pass: offsets_ok,
        detail: "on every edge the p0 state minus the p1 state is 0 or 1".into(),
    });

    let solo0 = solo_state(t, 0, r);
    let solo1 = solo_state(t, 1, r);
    let validity = match (solo0, solo1) {
        (Ok(a), Ok(b)) => {
            let present = |i: u32, s: u64| c.vertex_ids().any(|v| color_of(v) == i && state_of(v) == s);
            let da = aa_decide(0, a, r);
            let db = aa_decide(1, b, r);
            (
                present(0, a)
                    && present(1, b)
                    && da == Ratio::from_integer(0)
                    && db == Ratio::from_integer(1),
                format!("solo runs decide {da} and {db}"),
            )
        }
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    };
    checks.push(Check {
        name: "validity",
        pass: validity.0,
        detail: validity.1,
    });

    let allowed: BTreeSet<Option<u32>> = [None, Some(1), Some(2)].into_iter().collect();
    checks.push(Check {
        name: "alphabet",
        pass: run.alphabet.is_subset(&allowed),
        detail: format!(
            "read values {}",
            run.alphabet
                .iter()
                .map(|m| m.map_or("⊥".to_string(), |m| m.to_string()))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    });

    Ok(AgreementReport {
        rounds: r,
        checks,
        run: Some(run),
    })
}

/// The full report, including isomorphism with `Ch^r` of the input edge.
pub fn run_agreement(r: u32, limits: &Limits, trace: bool) -> Result<AgreementReport> {
    let mut report = check_protocol(r, &Transitions::default(), limits, trace)?;
    if let Some(run) = &report.run {
        let ch = iterate_subdivide(&input_edge(), r as usize, limits)?;
        let iso = chromatic_iso(&run.complex, &ch).is_some();
        report.checks.push(Check {
            name: "isomorphic to subdivision",
            pass: iso,
            detail: format!("compared with Ch^{r} of the input edge"),
        });
    }
    Ok(report)
}

fn connected(c: &ChromaticComplex) -> bool {
    let Some(start) = c.vertex_ids().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in c.neighbors(v) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == c.vertices().len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_by_parity() {
        assert_eq!(aa_encode(0), 2);
        assert_eq!(aa_encode(1), 1);
        assert_eq!(aa_encode(2), 2);
    }

    #[test]
    fn transitions() {
        assert_eq!(aa_next_state(0, None, 5).unwrap(), 15);
        assert_eq!(aa_next_state(1, Some(2), 0).unwrap(), 0);
        assert_eq!(aa_next_state(0, Some(2), 0).unwrap(), 1);
        assert_eq!(aa_next_state(1, Some(1), 0).unwrap(), 2);
        assert!(matches!(aa_next_state(0, Some(1), 0), Err(Error::Unreachable(_))));
    }

    #[test]
    fn decisions() {
        assert_eq!(aa_decide(0, 0, 3), Ratio::from_integer(0));
        assert_eq!(aa_decide(1, (27 - 1) / 2, 3), Ratio::from_integer(1));
        let run = run_protocol(1, &Transitions::default(), &Limits::default(), false).unwrap();
        let mut ds: Vec<Ratio<u64>> = run
            .complex
            .vertex_ids()
            .map(|v| aa_decide(run.complex.color_of(v).unwrap().0, run.states[v.index()], 1))
            .collect();
        ds.sort();
        let thirds: Vec<Ratio<u64>> = (0..4).map(|k| Ratio::new(k, 3)).collect();
        assert_eq!(ds, thirds);
    }

    #[test]
    fn one_and_two_rounds() {
        let l = Limits::default();
        for r in 1..=2 {
            let rep = run_agreement(r, &l, false).unwrap();
            assert!(rep.all_pass(), "{:?}", rep.checks);
            assert_eq!(rep.run.unwrap().complex.facets().len() as u64, eps_edges(r));
        }
        assert!(run_agreement(0, &l, false).is_err());
    }
}
