//! Exhaustive simulation of iterated immediate snapshot rounds.
//!
//! One round runs every face of the current protocol complex through every
//! immediate-snapshot schedule. A schedule is an ordered partition
//! `(B_1, …, B_m)` of the participants; a process in `B_j` sees what the
//! processes of `B_1 ∪ … ∪ B_j` wrote and ⊥ in every other slot. The
//! resulting local states, merged by equality, form the next complex.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::complex::{maximal, ChromaticComplex, Color, Simplex, Vertex, VertexId};
use crate::distinguishability::{colors_all_graphs, distinguishing_witness, Encoding};
use crate::error::{Error, Result, Witness};
use crate::iso::chromatic_iso;
use crate::partition::{fubini, ordered_partitions};
use crate::subdivision::{chromatic_subdivide, IteratedSubdivision, Limits};

pub type Schedule = Vec<Vec<Color>>;

/// Every ordered partition of `participants`, in a fixed order.
pub fn enumerate_schedules(participants: &[Color]) -> Vec<Schedule> {
    ordered_partitions(participants)
}

pub fn format_schedule(s: &Schedule) -> String {
    let mut out = String::new();
    for block in s {
        out.push('{');
        let names: Vec<String> = block.iter().map(|c| format!("p{c}")).collect();
        out.push_str(&names.join(" "));
        out.push('}');
    }
    out
}

/// One process's snapshot: a slot per participant, `None` for ⊥.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct View<M> {
    pub slots: Vec<(Color, Option<M>)>,
}

impl<M> View<M> {
    pub fn get(&self, c: Color) -> Option<&M> {
        self.slots
            .iter()
            .find(|(k, _)| *k == c)
            .and_then(|(_, m)| m.as_ref())
    }

    pub fn seen(&self) -> impl Iterator<Item = (Color, &M)> + '_ {
        self.slots.iter().filter_map(|(c, m)| m.as_ref().map(|m| (*c, m)))
    }
}

impl<M: fmt::Display> fmt::Display for View<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (c, m)) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match m {
                Some(m) => write!(f, "p{c}={m}")?,
                None => write!(f, "p{c}=⊥")?,
            }
        }
        write!(f, "]")
    }
}

/// Immediate-snapshot semantics for one layer. Views come back in color order.
pub fn run_is_layer<M: Clone>(values: &[(Color, M)], sched: &Schedule) -> Vec<(Color, View<M>)> {
    let mut sorted: Vec<(Color, M)> = values.to_vec();
    sorted.sort_by_key(|(c, _)| *c);
    let mut block_of: HashMap<Color, usize> = HashMap::new();
    for (j, block) in sched.iter().enumerate() {
        for &c in block {
            block_of.insert(c, j);
        }
    }
    sorted
        .iter()
        .map(|(c, _)| {
            let mine = block_of[c];
            let slots = sorted
                .iter()
                .map(|(q, m)| (*q, (block_of[q] <= mine).then(|| m.clone())))
                .collect();
            (*c, View { slots })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub round: usize,
    pub face: String,
    pub schedule: String,
    pub process: Color,
    pub view: String,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, p{} -> {})",
            self.round, self.face, self.schedule, self.process, self.view
        )
    }
}

/// Output of one simulated round. `states[i]` is the state of vertex `i`.
#[derive(Clone, Debug)]
pub struct RoundResult<S> {
    pub complex: ChromaticComplex,
    pub states: Vec<S>,
    pub trace: Vec<TraceLine>,
}

/// Number of (face, schedule) executions one round over `pc` performs.
pub fn executions_per_round(pc: &ChromaticComplex) -> BigUint {
    pc.all_faces()
        .filter(|s| !s.is_empty())
        .map(|s| fubini(s.len()))
        .sum()
}

/// Generic round: each vertex writes `write(v)`, and a process at `v` that
/// takes snapshot `view` moves to `next(v, view)`.
pub fn run_round<M, S, W, N, L>(
    pc: &ChromaticComplex,
    round: usize,
    limits: &Limits,
    trace: bool,
    write: W,
    next: N,
    label: L,
) -> Result<RoundResult<S>>
where
    M: Clone + fmt::Display + Send + Sync,
    S: Clone + Ord + Hash + Send + Sync,
    W: Fn(VertexId) -> Result<M> + Sync,
    N: Fn(VertexId, &View<M>) -> Result<S> + Sync,
    L: Fn(Color, &S) -> String,
{
    limits.check("protocol round", &executions_per_round(pc))?;
    let faces: Vec<&Simplex> = pc.all_faces().filter(|s| !s.is_empty()).collect();
    // per face: one state simplex per schedule, plus trace lines
    type FaceRun<S> = (Vec<Vec<(Color, S)>>, Vec<TraceLine>);
    let per_face: Vec<FaceRun<S>> = faces
        .par_iter()
        .map(|face| {
            let values = face
                .pairs()
                .iter()
                .map(|&(c, v)| Ok((c, write(v)?)))
                .collect::<Result<Vec<_>>>()?;
            let colors: Vec<Color> = face.colors().collect();
            let mut simplices = Vec::new();
            let mut lines = Vec::new();
            for sched in enumerate_schedules(&colors) {
                let views = run_is_layer(&values, &sched);
                let mut simplex = Vec::with_capacity(views.len());
                for (c, view) in &views {
                    let v = face.vertex_of_color(*c).expect("participant");
                    simplex.push((*c, next(v, view)?));
                    if trace {
                        lines.push(TraceLine {
                            round,
                            face: face.to_string(),
                            schedule: format_schedule(&sched),
                            process: *c,
                            view: view.to_string(),
                        });
                    }
                }
                simplices.push(simplex);
            }
            Ok((simplices, lines))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut keys: Vec<(Color, S)> = per_face
        .iter()
        .flat_map(|(s, _)| s.iter().flatten().cloned())
        .collect();
    keys.sort();
    keys.dedup();
    let index: HashMap<(Color, S), VertexId> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), VertexId(i as u32)))
        .collect();
    let vertices = keys
        .iter()
        .enumerate()
        .map(|(i, (c, s))| Vertex {
            id: VertexId(i as u32),
            color: *c,
            label: label(*c, s),
        })
        .collect();
    let mut simplices = Vec::new();
    let mut trace_out = Vec::new();
    for (faces, lines) in per_face {
        for f in faces {
            simplices.push(Simplex::new(f.into_iter().map(|k| (k.0, index[&k])))?);
        }
        trace_out.extend(lines);
    }
    let complex = ChromaticComplex::from_checked(pc.processes(), vertices, maximal(simplices));
    Ok(RoundResult {
        complex,
        states: keys.into_iter().map(|k| k.1).collect(),
        trace: trace_out,
    })
}

/// State after a full-information round: the simplex of the previous complex
/// that the process saw, itself included.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeenState {
    pub seen: Simplex,
}

fn seen_label(pc: &ChromaticComplex, c: Color, seen: &Simplex) -> String {
    let inner: Vec<&str> = seen.vertices().map(|v| pc.label_of(v).unwrap_or("?")).collect();
    format!("({c}, [{}])", inner.join(", "))
}

/// One round of the full-information protocol: processes write their whole
/// state and adopt what they read.
pub fn full_info_round(
    pc: &ChromaticComplex,
    round: usize,
    limits: &Limits,
    trace: bool,
) -> Result<RoundResult<SeenState>> {
    run_round(
        pc,
        round,
        limits,
        trace,
        Ok,
        |_, view: &View<VertexId>| {
            Ok(SeenState {
                seen: Simplex::new(view.seen().map(|(c, v)| (c, *v)))?,
            })
        },
        |c, s| seen_label(pc, c, &s.seen),
    )
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DecodePolicy {
    /// Map each read code back to the unique vertex of that color in the
    /// reader's link with that code.
    #[default]
    Decode,
    /// Keep the reader's own vertex and the raw codes it read.
    RawView,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundedState {
    Decoded(SeenState),
    Raw { own: VertexId, codes: Vec<(Color, u32)> },
}

/// The vertex of `pc` that process `own` concludes wrote `code` in slot `q`.
pub fn decode(pc: &ChromaticComplex, enc: &Encoding, own: VertexId, q: Color, code: u32) -> Result<VertexId> {
    let mut found: Option<VertexId> = None;
    for &w in pc.neighbors(own) {
        if pc.color_of(w) == Some(q) && enc.get(w) == Some(code) {
            if let Some(first) = found {
                return Err(Error::DecodeAmbiguity(Witness {
                    observer: own,
                    first,
                    second: w,
                    code,
                }));
            }
            found = Some(w);
        }
    }
    found.ok_or_else(|| {
        Error::Inconsistent(format!(
            "vertex {own} read code {code} from p{q} but no neighbor has it"
        ))
    })
}

/// One bounded round: each process writes `enc` of its vertex.
pub fn biis_round(
    pc: &ChromaticComplex,
    enc: &Encoding,
    policy: DecodePolicy,
    round: usize,
    limits: &Limits,
    trace: bool,
) -> Result<RoundResult<BoundedState>> {
    enc.check_total(pc)?;
    run_round(
        pc,
        round,
        limits,
        trace,
        |v| enc.code(v),
        |own, view: &View<u32>| {
            let mine = pc.color_of(own).ok_or(Error::UnknownVertex(own))?;
            match policy {
                DecodePolicy::Decode => {
                    let mut pairs = vec![(mine, own)];
                    for (q, &m) in view.seen() {
                        if q != mine {
                            pairs.push((q, decode(pc, enc, own, q, m)?));
                        }
                    }
                    Ok(BoundedState::Decoded(SeenState {
                        seen: Simplex::new(pairs)?,
                    }))
                }
                DecodePolicy::RawView => Ok(BoundedState::Raw {
                    own,
                    codes: view
                        .seen()
                        .filter(|(q, _)| *q != mine)
                        .map(|(q, &m)| (q, m))
                        .collect(),
                }),
            }
        },
        |c, s| match s {
            BoundedState::Decoded(s) => seen_label(pc, c, &s.seen),
            BoundedState::Raw { own, codes } => {
                let read: Vec<String> = codes.iter().map(|(q, m)| format!("p{q}:{m}")).collect();
                format!(
                    "({c}, {}, [{}])",
                    pc.label_of(*own).unwrap_or("?"),
                    read.join(", ")
                )
            }
        },
    )
}

pub enum Mode<'a> {
    FullInfo,
    /// `encodings[r']` is defined on the vertices of `Ch^{r'}` of the input.
    Bounded(&'a [Encoding]),
}

#[derive(Clone, Debug)]
pub struct ProtocolRun {
    pub complex: ChromaticComplex,
    pub trace: Vec<TraceLine>,
}

/// `r` rounds from `input`. Bounded rounds decode against the known
/// subdivision, so each protocol vertex is tracked as a vertex of `Ch^{r'}`.
pub fn iterate_protocol(
    input: &ChromaticComplex,
    r: usize,
    mode: Mode<'_>,
    limits: &Limits,
    trace: bool,
) -> Result<ProtocolRun> {
    let mut pc = input.clone();
    let mut lines = Vec::new();
    match mode {
        Mode::FullInfo => {
            for round in 0..r {
                let out = full_info_round(&pc, round, limits, trace)?;
                pc = out.complex;
                lines.extend(out.trace);
            }
        }
        Mode::Bounded(encodings) => {
            if encodings.len() < r {
                return Err(Error::InvalidArgument(format!(
                    "{r} rounds requested but the schedule has {} encodings",
                    encodings.len()
                )));
            }
            let mut levels = IteratedSubdivision::new(input.clone());
            // protocol vertex id -> vertex of the current subdivision level
            let mut to_level: Vec<VertexId> = pc.vertex_ids().collect();
            let mut by_id: HashMap<VertexId, VertexId> =
                pc.vertex_ids().zip(to_level.iter().copied()).collect();
            for (round, enc_level) in encodings.iter().take(r).enumerate() {
                let enc = Encoding::from_pairs(
                    pc.vertex_ids()
                        .map(|u| Ok((u, enc_level.code(by_id[&u])?)))
                        .collect::<Result<Vec<_>>>()?,
                );
                let out = biis_round(&pc, &enc, DecodePolicy::Decode, round, limits, trace)?;
                levels.push_level(limits)?;
                let step = levels.step(round + 1);
                to_level = out
                    .states
                    .iter()
                    .zip(out.complex.vertices())
                    .map(|(s, vx)| {
                        let BoundedState::Decoded(s) = s else {
                            unreachable!("decode policy yields decoded states")
                        };
                        let carrier = Simplex::new(s.seen.pairs().iter().map(|&(c, v)| (c, by_id[&v])))?;
                        step.vertex_for(vx.color, &carrier).ok_or_else(|| {
                            Error::Inconsistent(format!("state {} has no subdivision vertex", vx.label))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                pc = out.complex;
                by_id = pc.vertex_ids().zip(to_level.iter().copied()).collect();
                lines.extend(out.trace);
            }
        }
    }
    Ok(ProtocolRun {
        complex: pc,
        trace: lines,
    })
}

#[derive(Clone, Debug)]
pub struct Theorem1Report {
    pub distinguishable: bool,
    pub witness: Option<Witness>,
    pub proper_coloring: bool,
    pub isomorphic: bool,
    /// Vertex of largest degree in the raw-view complex, with its degree.
    pub max_degree: Option<(VertexId, usize)>,
    pub bounded: ChromaticComplex,
}

/// Compares distinguishability of `enc` with isomorphism between the
/// raw-view bounded round and `Ch I`; an error if they disagree.
pub fn theorem1_check(input: &ChromaticComplex, enc: &Encoding, limits: &Limits) -> Result<Theorem1Report> {
    let witness = distinguishing_witness(input, enc)?;
    let distinguishable = witness.is_none();
    let proper_coloring = colors_all_graphs(input, enc)?;
    let bounded = biis_round(input, enc, DecodePolicy::RawView, 0, limits, false)?.complex;
    let ch = chromatic_subdivide(input, limits)?.into_complex();
    let isomorphic = chromatic_iso(&bounded, &ch).is_some();
    if distinguishable != proper_coloring || distinguishable != isomorphic {
        return Err(Error::Inconsistent(format!(
            "distinguishable = {distinguishable}, proper coloring = {proper_coloring}, isomorphic = {isomorphic}"
        )));
    }
    let max_degree = bounded
        .vertex_ids()
        .map(|v| (v, bounded.degree(v)))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
    Ok(Theorem1Report {
        distinguishable,
        witness,
        proper_coloring,
        isomorphic,
        max_degree,
        bounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FVector;

    #[test]
    fn schedule_listing() {
        assert_eq!(enumerate_schedules(&[Color(0)]).len(), 1);
        let two = enumerate_schedules(&[Color(0), Color(1)]);
        assert_eq!(
            two.iter().map(format_schedule).collect::<Vec<_>>(),
            vec!["{p0}{p1}", "{p1}{p0}", "{p0 p1}"]
        );
        assert_eq!(enumerate_schedules(&[Color(0), Color(1), Color(2)]).len(), 13);
    }

    #[test]
    fn layer_semantics() {
        let vals = [(Color(0), 'a'), (Color(1), 'b')];
        let together = run_is_layer(&vals, &vec![vec![Color(0), Color(1)]]);
        assert!(together.iter().all(|(_, v)| v.seen().count() == 2));
        let first = run_is_layer(&vals, &vec![vec![Color(0)], vec![Color(1)]]);
        assert_eq!(first[0].1.seen().count(), 1);
        assert_eq!(first[0].1.get(Color(1)), None);
        assert_eq!(first[1].1.seen().count(), 2);
        let solo = run_is_layer(&vals[..1], &vec![vec![Color(0)]]);
        assert_eq!(solo[0].1.slots, vec![(Color(0), Some('a'))]);
    }

    #[test]
    fn full_info_rounds() {
        let l = Limits::default();
        let e = full_info_round(&ChromaticComplex::simplex(2), 0, &l, false).unwrap();
        assert_eq!(e.complex.f_vector(), FVector::from_u64(&[1, 4, 3]));
        let t = full_info_round(&ChromaticComplex::simplex(3), 0, &l, false).unwrap();
        assert_eq!(t.complex.facets().len(), 13);
        assert_eq!(t.complex.vertices().len(), 12);
        let p = full_info_round(&ChromaticComplex::simplex(1), 0, &l, false).unwrap();
        assert_eq!(p.complex.vertices().len(), 1);
        let two = iterate_protocol(&ChromaticComplex::simplex(2), 2, Mode::FullInfo, &l, false).unwrap();
        assert_eq!(two.complex.facets().len(), 9);
    }

    #[test]
    fn bounded_round_with_injective_code() {
        let l = Limits::default();
        let d1 = ChromaticComplex::simplex(2);
        let out = biis_round(&d1, &Encoding::injective(&d1), DecodePolicy::Decode, 0, &l, false).unwrap();
        let ch = chromatic_subdivide(&d1, &l).unwrap().into_complex();
        assert!(chromatic_iso(&out.complex, &ch).is_some());
        let pt = ChromaticComplex::simplex(1);
        let out = biis_round(
            &pt,
            &Encoding::constant(&pt, 7),
            DecodePolicy::Decode,
            0,
            &l,
            false,
        )
        .unwrap();
        assert_eq!(out.complex.vertices().len(), 1);
    }

    fn fork() -> ChromaticComplex {
        ChromaticComplex::from_parts(2, &[0, 1, 1], &[&[0, 1], &[0, 2]]).unwrap()
    }

    #[test]
    fn clashing_code_on_fork() {
        let l = Limits::default();
        let f = fork();
        let clash = Encoding::from_pairs([(VertexId(0), 1), (VertexId(1), 2), (VertexId(2), 2)]);
        let err = biis_round(&f, &clash, DecodePolicy::Decode, 0, &l, false).unwrap_err();
        assert!(matches!(err, Error::DecodeAmbiguity(w) if w.observer == VertexId(0)));
        let report = theorem1_check(&f, &clash, &l).unwrap();
        assert!(!report.distinguishable && !report.isomorphic);
        assert_eq!(report.max_degree.unwrap().1, 4);
        let ok = theorem1_check(&f, &Encoding::injective(&f), &l).unwrap();
        assert!(ok.distinguishable && ok.isomorphic);
    }

    #[test]
    fn trace_lines_render() {
        let l = Limits::default();
        let out = full_info_round(&ChromaticComplex::simplex(2), 3, &l, true).unwrap();
        // 1 + 1 solo executions and 3 schedules of two processes
        assert_eq!(out.trace.len(), 2 + 6);
        let line = out.trace[0].to_string();
        assert!(line.starts_with("(3, {0}, {p0}, p0 -> [p0=0])"), "{line}");
    }
}
