//! One-step homotopy systems `Sys[A]` and `Sys[dFl]` on digraph maps,
//! multi-step witnesses and their search, deformation retractions and
//! contraction certificates.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complexes::{
    classify_simplicial_morphism, directed_flag_complex, simplicial_closure_of_cylinder, OrderedSimplicialComplex,
    SimplicialMorphismClass,
};
use crate::digraph::{classify_digraph_map, Digraph, DigraphMapClass, GraphError, VertexMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("map `{0}` is not a weak digraph map")]
    NotWeak(String),
    #[error("map `{0}` is not triangle-collapsing")]
    NotTc(String),
    #[error("not a retraction: {0}")]
    NotRetraction(String),
    #[error("malformed witness: {0}")]
    Malformed(String),
    #[error("unsupported system for this operation: {0}")]
    Unsupported(String),
}

/// Which one-step homotopy system to use.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    A,
    Dfl,
    /// `Sys[dFl]` with maps required to agree on the listed source vertices.
    DflRel(Vec<usize>),
}

impl SystemKind {
    fn required_class(&self) -> DigraphMapClass {
        match self {
            SystemKind::A => DigraphMapClass::Weak,
            _ => DigraphMapClass::TriangleCollapsing,
        }
    }
}

fn require_class(
    f: &VertexMap,
    g: &Digraph,
    h: &Digraph,
    need: DigraphMapClass,
    name: &str,
) -> Result<(), HomotopyError> {
    let c = classify_digraph_map(f, g, h)?;
    if c < need {
        return Err(if need == DigraphMapClass::Weak || c == DigraphMapClass::NotWeak {
            HomotopyError::NotWeak(name.to_string())
        } else {
            HomotopyError::NotTc(name.to_string())
        });
    }
    Ok(())
}

/// One-step `Sys[A]` homotopy from `f` to `g`: `f(x) ⇒≤ g(x)` for all `x`.
pub fn one_step_a(f: &VertexMap, g: &VertexMap, gr: &Digraph, h: &Digraph) -> Result<bool, HomotopyError> {
    require_class(f, gr, h, DigraphMapClass::Weak, "f")?;
    require_class(g, gr, h, DigraphMapClass::Weak, "g")?;
    Ok(a_condition(f, g, gr, h))
}

fn a_condition(f: &VertexMap, g: &VertexMap, gr: &Digraph, h: &Digraph) -> bool {
    (0..gr.vertex_count()).all(|x| h.tooreq(f.apply(x), g.apply(x)))
}

/// One-step `Sys[dFl]` homotopy from `f` to `g`, decided by the two edge
/// conditions: `x ⇒≤ y` implies `f(x) ⇒≤ g(y)`, and an edge `x → y` with
/// `f(x) = g(y)` forces `f(x) = f(y) = g(x) = g(y)`.
pub fn one_step_dfl(f: &VertexMap, g: &VertexMap, gr: &Digraph, h: &Digraph) -> Result<bool, HomotopyError> {
    require_class(f, gr, h, DigraphMapClass::TriangleCollapsing, "f")?;
    require_class(g, gr, h, DigraphMapClass::TriangleCollapsing, "g")?;
    Ok(dfl_condition(f, g, gr, h))
}

fn dfl_condition(f: &VertexMap, g: &VertexMap, gr: &Digraph, h: &Digraph) -> bool {
    if !a_condition(f, g, gr, h) {
        return false;
    }
    gr.edges().all(|(x, y)| {
        let (fx, gy) = (f.apply(x), g.apply(y));
        if fx == gy {
            f.apply(y) == fx && g.apply(x) == fx
        } else {
            h.has_edge(fx, gy)
        }
    })
}

/// [`one_step_dfl`] plus agreement of `f` and `g` on `fixed`.
pub fn one_step_dfl_relative(
    f: &VertexMap,
    g: &VertexMap,
    gr: &Digraph,
    h: &Digraph,
    fixed: &[usize],
) -> Result<bool, HomotopyError> {
    if let Some(&v) = fixed.iter().find(|&&v| v >= gr.vertex_count()) {
        return Err(GraphError::VertexOutOfRange { vertex: v, count: gr.vertex_count() }.into());
    }
    Ok(one_step_dfl(f, g, gr, h)? && fixed.iter().all(|&v| f.apply(v) == g.apply(v)))
}

pub fn one_step(
    system: &SystemKind,
    f: &VertexMap,
    g: &VertexMap,
    gr: &Digraph,
    h: &Digraph,
) -> Result<bool, HomotopyError> {
    match system {
        SystemKind::A => one_step_a(f, g, gr, h),
        SystemKind::Dfl => one_step_dfl(f, g, gr, h),
        SystemKind::DflRel(fixed) => one_step_dfl_relative(f, g, gr, h, fixed),
    }
}

/// Independent decision of one-step `Sys[dFl]` homotopy: build the cylinder
/// map `F(v,0) = f(v)`, `F(v,1) = g(v)` and test whether it is a
/// triangle-collapsing simplicial morphism from the simplicial closure of
/// `Cyl(dFl(G))` to `dFl(H)`.
pub fn one_step_dfl_oracle(f: &VertexMap, g: &VertexMap, gr: &Digraph, h: &Digraph) -> Result<bool, HomotopyError> {
    DflOracle::new(gr, h).one_step(f, g)
}

/// The closure-of-cylinder oracle with its complexes built once.
pub struct DflOracle<'a> {
    source: &'a Digraph,
    target: &'a Digraph,
    closure: OrderedSimplicialComplex,
    flag: OrderedSimplicialComplex,
}

impl<'a> DflOracle<'a> {
    pub fn new(source: &'a Digraph, target: &'a Digraph) -> Self {
        let n = source.vertex_count();
        let closure = simplicial_closure_of_cylinder(&directed_flag_complex(source, n));
        let flag = directed_flag_complex(target, n);
        DflOracle { source, target, closure, flag }
    }

    pub fn one_step(&self, f: &VertexMap, g: &VertexMap) -> Result<bool, HomotopyError> {
        require_class(f, self.source, self.target, DigraphMapClass::TriangleCollapsing, "f")?;
        require_class(g, self.source, self.target, DigraphMapClass::TriangleCollapsing, "g")?;
        let big_f = cylinder_map(f, g);
        let class = classify_simplicial_morphism(&big_f, &self.closure, &self.flag)
            .map_err(|e| HomotopyError::Malformed(e.to_string()))?;
        Ok(class >= SimplicialMorphismClass::TriangleCollapsing)
    }
}

/// The map on `V × {0,1}` (vertex `2v + i`) that is `f` on level 0 and `g` on
/// level 1.
pub fn cylinder_map(f: &VertexMap, g: &VertexMap) -> VertexMap {
    let image = (0..2 * f.source_count()).map(|u| if u % 2 == 0 { f.apply(u / 2) } else { g.apply(u / 2) }).collect();
    VertexMap::new(image, f.target_count()).unwrap()
}

/// A zig-zag `f_0, …, f_m` of maps with a direction per adjacent pair:
/// `forward[i]` means a one-step homotopy from `f_i` to `f_{i+1}`,
/// otherwise from `f_{i+1}` to `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiStepWitness {
    maps: Vec<VertexMap>,
    forward: Vec<bool>,
}

/// One link of a [`MultiStepWitness`].
#[derive(Clone, Copy, Debug)]
pub struct Step<'a> {
    pub from: &'a VertexMap,
    pub to: &'a VertexMap,
    pub forward: bool,
}

impl<'a> Step<'a> {
    /// The pair `(lower, upper)` with a one-step homotopy from lower to upper.
    pub fn lower_upper(&self) -> (&'a VertexMap, &'a VertexMap) {
        if self.forward {
            (self.from, self.to)
        } else {
            (self.to, self.from)
        }
    }
}

impl MultiStepWitness {
    pub fn new(maps: Vec<VertexMap>, forward: Vec<bool>) -> Result<Self, HomotopyError> {
        if maps.is_empty() || forward.len() + 1 != maps.len() {
            return Err(HomotopyError::Malformed(format!("{} maps with {} directions", maps.len(), forward.len())));
        }
        let (s, t) = (maps[0].source_count(), maps[0].target_count());
        if maps.iter().any(|m| m.source_count() != s || m.target_count() != t) {
            return Err(HomotopyError::Malformed("maps of differing shapes".into()));
        }
        Ok(MultiStepWitness { maps, forward })
    }

    /// The empty zig-zag at `f`.
    pub fn trivial(f: VertexMap) -> Self {
        MultiStepWitness { maps: vec![f], forward: Vec::new() }
    }

    pub fn source(&self) -> &VertexMap {
        &self.maps[0]
    }

    pub fn target(&self) -> &VertexMap {
        self.maps.last().unwrap()
    }

    pub fn maps(&self) -> &[VertexMap] {
        &self.maps
    }

    pub fn directions(&self) -> &[bool] {
        &self.forward
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn steps(&self) -> impl Iterator<Item = Step<'_>> {
        self.forward.iter().enumerate().map(move |(i, &fw)| Step { from: &self.maps[i], to: &self.maps[i + 1], forward: fw })
    }

    pub fn reversed(&self) -> Self {
        let maps = self.maps.iter().rev().cloned().collect();
        let forward = self.forward.iter().rev().map(|d| !d).collect();
        MultiStepWitness { maps, forward }
    }

    /// Concatenate with a witness starting where this one ends.
    pub fn then(&self, other: &MultiStepWitness) -> Result<Self, HomotopyError> {
        if self.target() != other.source() {
            return Err(HomotopyError::Malformed("witnesses do not meet".into()));
        }
        let mut maps = self.maps.clone();
        maps.extend(other.maps[1..].iter().cloned());
        let mut forward = self.forward.clone();
        forward.extend(&other.forward);
        Ok(MultiStepWitness { maps, forward })
    }

    /// `post ∘ f_i ∘ pre` for every map in the zig-zag.
    pub fn whisker(&self, pre: Option<&VertexMap>, post: Option<&VertexMap>) -> Self {
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let m = match pre {
                    Some(p) => m.after(p),
                    None => m.clone(),
                };
                match post {
                    Some(q) => q.after(&m),
                    None => m,
                }
            })
            .collect();
        MultiStepWitness { maps, forward: self.forward.clone() }
    }

    /// Re-check every link in `system`; the error names the first failing step.
    pub fn verify(&self, system: &SystemKind, gr: &Digraph, h: &Digraph) -> Result<(), WitnessFailure> {
        for (i, m) in self.maps.iter().enumerate() {
            let class = classify_digraph_map(m, gr, h).map_err(|e| WitnessFailure { step: i, reason: e.to_string() })?;
            if class < system.required_class() {
                return Err(WitnessFailure { step: i, reason: format!("map {i} is {class:?}") });
            }
        }
        for (i, s) in self.steps().enumerate() {
            let (lo, up) = s.lower_upper();
            match one_step(system, lo, up, gr, h) {
                Ok(true) => {}
                Ok(false) => return Err(WitnessFailure { step: i, reason: "one-step condition fails".into() }),
                Err(e) => return Err(WitnessFailure { step: i, reason: e.to_string() }),
            }
        }
        Ok(())
    }

    pub fn to_doc(&self) -> WitnessDoc {
        WitnessDoc {
            target_count: self.maps[0].target_count(),
            maps: self.maps.iter().map(|m| m.image().to_vec()).collect(),
            directions: self.forward.iter().map(|&f| if f { Direction::Forward } else { Direction::Backward }).collect(),
        }
    }

    pub fn from_doc(doc: &WitnessDoc) -> Result<Self, HomotopyError> {
        let maps = doc
            .maps
            .iter()
            .map(|m| VertexMap::new(m.clone(), doc.target_count))
            .collect::<Result<Vec<_>, _>>()?;
        MultiStepWitness::new(maps, doc.directions.iter().map(|d| *d == Direction::Forward).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("step {step}: {reason}")]
pub struct WitnessFailure {
    pub step: usize,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// JSON form of a witness: maps as integer arrays, one direction per step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub target_count: usize,
    pub maps: Vec<Vec<usize>>,
    pub directions: Vec<Direction>,
}

/// Result of a bounded breadth-first search in the one-step digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A shortest zig-zag from `f` to `g`.
    Found(MultiStepWitness),
    /// The whole component of `f` was explored without meeting `g`.
    Absent { explored: usize },
    /// The budget ran out first; nothing is claimed.
    Inconclusive { explored: usize },
}

/// Breadth-first search for a zig-zag from `f` to `g` in `Sys(G, H)`.
///
/// Neighbours of a map are enumerated in lexicographic order of their image
/// sequences. `budget` bounds the number of candidate maps examined.
pub fn multi_step_search(
    f: &VertexMap,
    g: &VertexMap,
    gr: &Digraph,
    h: &Digraph,
    system: &SystemKind,
    budget: usize,
) -> Result<SearchOutcome, HomotopyError> {
    let need = system.required_class();
    require_class(f, gr, h, need, "f")?;
    require_class(g, gr, h, need, "g")?;
    let fixed: &[usize] = match system {
        SystemKind::DflRel(a) => a,
        _ => &[],
    };
    if f == g {
        return Ok(SearchOutcome::Found(MultiStepWitness::trivial(f.clone())));
    }
    let n = gr.vertex_count();
    let mut is_fixed = vec![false; n];
    for &v in fixed {
        if v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v, count: n }.into());
        }
        is_fixed[v] = true;
    }
    if fixed.iter().any(|&v| f.apply(v) != g.apply(v)) {
        // every map in the component of f agrees with f on the fixed set
        return Ok(SearchOutcome::Absent { explored: 1 });
    }
    let mut parent: HashMap<VertexMap, Option<(VertexMap, bool)>> = HashMap::new();
    parent.insert(f.clone(), None);
    let mut queue = VecDeque::from([f.clone()]);
    let mut examined = 0usize;
    while let Some(cur) = queue.pop_front() {
        for forward in [true, false] {
            let choices: Vec<Vec<usize>> = (0..n)
                .map(|x| {
                    let c = cur.apply(x);
                    if is_fixed[x] {
                        return vec![c];
                    }
                    let nb = if forward { h.out_neighbors(c) } else { h.in_neighbors(c) };
                    let mut l: Vec<usize> = nb.iter().copied().chain([c]).collect();
                    l.sort_unstable();
                    l
                })
                .collect();
            let mut idx = vec![0usize; n];
            loop {
                let image: Vec<usize> = (0..n).map(|x| choices[x][idx[x]]).collect();
                let cand = VertexMap::new(image, h.vertex_count()).unwrap();
                if !parent.contains_key(&cand) {
                    examined += 1;
                    if examined > budget {
                        return Ok(SearchOutcome::Inconclusive { explored: parent.len() });
                    }
                    let ok = classify_digraph_map(&cand, gr, h)? >= need && {
                        let (lo, up) = if forward { (&cur, &cand) } else { (&cand, &cur) };
                        match system {
                            SystemKind::A => a_condition(lo, up, gr, h),
                            _ => dfl_condition(lo, up, gr, h),
                        }
                    };
                    if ok {
                        parent.insert(cand.clone(), Some((cur.clone(), forward)));
                        if &cand == g {
                            return Ok(SearchOutcome::Found(rebuild(&parent, g)));
                        }
                        queue.push_back(cand);
                    }
                }
                // odometer, last coordinate fastest
                let mut pos = n;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX || n == 0 {
                    break;
                }
            }
        }
    }
    Ok(SearchOutcome::Absent { explored: parent.len() })
}

fn rebuild(parent: &HashMap<VertexMap, Option<(VertexMap, bool)>>, end: &VertexMap) -> MultiStepWitness {
    let mut maps = vec![end.clone()];
    let mut dirs = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, fw))) = parent.get(&cur) {
        maps.push(prev.clone());
        dirs.push(*fw);
        cur = prev.clone();
    }
    maps.reverse();
    dirs.reverse();
    MultiStepWitness { maps, forward: dirs }
}

/// Maps `f: G → H`, `g: H → G` with witnesses for `g∘f ≃ id_G` and
/// `f∘g ≃ id_H`.
#[derive(Clone, Debug)]
pub struct EquivalenceCertificate {
    pub source: Digraph,
    pub target: Digraph,
    pub f: VertexMap,
    pub g: VertexMap,
    /// Zig-zag from `g∘f` to `id_G`.
    pub witness_gf: MultiStepWitness,
    /// Zig-zag from `f∘g` to `id_H`.
    pub witness_fg: MultiStepWitness,
}

impl EquivalenceCertificate {
    /// The identity certificate on `g`.
    pub fn identity(g: &Digraph) -> Self {
        let id = VertexMap::identity(g.vertex_count());
        EquivalenceCertificate {
            source: g.clone(),
            target: g.clone(),
            f: id.clone(),
            g: id.clone(),
            witness_gf: MultiStepWitness::trivial(id.clone()),
            witness_fg: MultiStepWitness::trivial(id),
        }
    }
}

/// Re-verify every part of a certificate; the error lists all failures.
pub fn verify_certificate(cert: &EquivalenceCertificate, system: &SystemKind) -> Result<(), Vec<String>> {
    let mut failures = Vec::new();
    let (gr, h) = (&cert.source, &cert.target);
    let need = system.required_class();
    for (name, m, a, b) in [("f", &cert.f, gr, h), ("g", &cert.g, h, gr)] {
        match classify_digraph_map(m, a, b) {
            Ok(c) if c >= need => {}
            Ok(c) => failures.push(format!("{name} is {c:?}")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    if !failures.is_empty() {
        return Err(failures);
    }
    let checks = [
        ("g∘f", &cert.witness_gf, cert.g.after(&cert.f), gr),
        ("f∘g", &cert.witness_fg, cert.f.after(&cert.g), h),
    ];
    for (name, w, comp, space) in checks {
        if w.source() != &comp {
            failures.push(format!("{name} witness does not start at {name}"));
        }
        if w.target() != &VertexMap::identity(space.vertex_count()) {
            failures.push(format!("{name} witness does not end at the identity"));
        }
        if let Err(e) = w.verify(system, space, space) {
            failures.push(format!("{name} witness, {e}"));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

fn check_retraction(gr: &Digraph, subset: &[usize], r: &VertexMap) -> Result<(), HomotopyError> {
    let n = gr.vertex_count();
    if r.source_count() != n || r.target_count() != n {
        return Err(HomotopyError::NotRetraction(format!("map is not an endomap of {n} vertices")));
    }
    let mut in_a = vec![false; n];
    for &a in subset {
        if a >= n {
            return Err(GraphError::VertexOutOfRange { vertex: a, count: n }.into());
        }
        in_a[a] = true;
    }
    if let Some(&a) = subset.iter().find(|&&a| r.apply(a) != a) {
        return Err(HomotopyError::NotRetraction(format!("r moves {a}, which lies in the subset")));
    }
    if let Some(x) = (0..n).find(|&x| !in_a[r.apply(x)]) {
        return Err(HomotopyError::NotRetraction(format!("r sends {x} outside the subset")));
    }
    Ok(())
}

/// Sufficient test for `r` to be a `dFl`-deformation retraction onto `subset`:
/// `r` is triangle-collapsing and either `x ⇒≤ r(x)` for all `x` and
/// `x → r(y)` for every edge `(x, y)`, or the mirrored pair holds.
/// On success returns the one-step witness between `id` and `r`.
pub fn check_dfl_deformation_retraction(
    gr: &Digraph,
    subset: &[usize],
    r: &VertexMap,
) -> Result<Option<MultiStepWitness>, HomotopyError> {
    check_retraction(gr, subset, r)?;
    let class = classify_digraph_map(r, gr, gr)?;
    if !class.is_weak() {
        return Err(HomotopyError::NotRetraction("r is not a weak digraph map".into()));
    }
    if !class.is_tc() {
        return Ok(None);
    }
    let n = gr.vertex_count();
    let up = (0..n).all(|x| gr.tooreq(x, r.apply(x))) && gr.edges().all(|(x, y)| gr.has_edge(x, r.apply(y)));
    let down = (0..n).all(|x| gr.tooreq(r.apply(x), x)) && gr.edges().all(|(x, y)| gr.has_edge(r.apply(x), y));
    Ok(retraction_witness(n, r, up, down))
}

/// `r` is an `A`-deformation retraction onto `subset` when `x ⇒≤ r(x)` for
/// all `x`, or `r(x) ⇒≤ x` for all `x`.
pub fn check_a_deformation_retraction(
    gr: &Digraph,
    subset: &[usize],
    r: &VertexMap,
) -> Result<Option<MultiStepWitness>, HomotopyError> {
    check_retraction(gr, subset, r)?;
    if !classify_digraph_map(r, gr, gr)?.is_weak() {
        return Err(HomotopyError::NotRetraction("r is not a weak digraph map".into()));
    }
    let n = gr.vertex_count();
    let up = (0..n).all(|x| gr.tooreq(x, r.apply(x)));
    let down = (0..n).all(|x| gr.tooreq(r.apply(x), x));
    Ok(retraction_witness(n, r, up, down))
}

fn retraction_witness(n: usize, r: &VertexMap, up: bool, down: bool) -> Option<MultiStepWitness> {
    let id = VertexMap::identity(n);
    if up {
        Some(MultiStepWitness { maps: vec![id, r.clone()], forward: vec![true] })
    } else if down {
        Some(MultiStepWitness { maps: vec![id, r.clone()], forward: vec![false] })
    } else {
        None
    }
}

/// One deformation retraction of a contraction sequence, in original vertex
/// labels: `moves` sends each removed vertex to a kept one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractionStep {
    pub moves: Vec<(usize, usize)>,
    /// `true` when `x ⇒≤ r(x)` (homotopy from the identity to `r`).
    pub forward: bool,
}

/// Outcome of [`greedy_contract`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub vertex_count: usize,
    pub steps: Vec<RetractionStep>,
    /// Vertices left when no further move was found.
    pub remaining: Vec<usize>,
}

impl Contraction {
    pub fn reached_point(&self) -> bool {
        self.remaining.len() <= 1
    }

    /// The composite retraction after all steps, as a map `G → G`.
    pub fn composite(&self) -> VertexMap {
        let mut m = VertexMap::identity(self.vertex_count);
        for s in &self.steps {
            m = step_map(self.vertex_count, s).after(&m);
        }
        m
    }

    /// Zig-zag from `id_G` to the composite retraction.
    pub fn witness(&self) -> MultiStepWitness {
        let mut maps = vec![VertexMap::identity(self.vertex_count)];
        let mut forward = Vec::new();
        for s in &self.steps {
            let next = step_map(self.vertex_count, s).after(maps.last().unwrap());
            maps.push(next);
            forward.push(s.forward);
        }
        MultiStepWitness { maps, forward }
    }

    /// Certificate `G ≃ point` when the contraction reached a single vertex.
    pub fn certificate(&self, gr: &Digraph) -> Option<EquivalenceCertificate> {
        if !self.reached_point() || self.vertex_count == 0 {
            return None;
        }
        let c = self.remaining[0];
        let f = VertexMap::constant(self.vertex_count, 1, 0);
        let g = VertexMap::constant(1, self.vertex_count, c);
        Some(EquivalenceCertificate {
            source: gr.clone(),
            target: Digraph::empty(1),
            f,
            g,
            witness_gf: self.witness().reversed(),
            witness_fg: MultiStepWitness::trivial(VertexMap::identity(1)),
        })
    }
}

fn step_map(n: usize, s: &RetractionStep) -> VertexMap {
    let mut image: Vec<usize> = (0..n).collect();
    for &(a, b) in &s.moves {
        image[a] = b;
    }
    VertexMap::new(image, n).unwrap()
}

/// Greedily retract `G` towards a single vertex with verified deformation
/// retractions. Move order: leaves onto their neighbour, then a star centre
/// taking everything at once, then single vertices `a ↦ b0` scanning `a` and
/// its neighbours `b0` in vertex order. Failure to reach a point proves
/// nothing.
pub fn greedy_contract(gr: &Digraph, system: &SystemKind) -> Result<Contraction, HomotopyError> {
    let check = match system {
        SystemKind::A => check_a_deformation_retraction,
        SystemKind::Dfl => check_dfl_deformation_retraction,
        SystemKind::DflRel(_) => return Err(HomotopyError::Unsupported("relative system".into())),
    };
    let n = gr.vertex_count();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut steps = Vec::new();
    'outer: while alive.len() > 1 {
        let sub = gr.induced(&alive);
        let m = alive.len();
        let attempt = |moves: &[(usize, usize)]| -> Result<Option<bool>, HomotopyError> {
            let mut image: Vec<usize> = (0..m).collect();
            for &(a, b) in moves {
                image[a] = b;
            }
            let r = VertexMap::new(image, m).unwrap();
            let keep: Vec<usize> = (0..m).filter(|v| !moves.iter().any(|mv| mv.0 == *v)).collect();
            match check(&sub, &keep, &r) {
                Ok(w) => Ok(w.map(|w| w.directions()[0])),
                Err(HomotopyError::NotRetraction(_)) => Ok(None),
                Err(e) => Err(e),
            }
        };
        let mut candidates: Vec<Vec<(usize, usize)>> = Vec::new();
        for v in 0..m {
            let nb = sub.neighbors(v);
            let reciprocal = nb.len() == 1 && sub.has_edge(v, nb[0]) && sub.has_edge(nb[0], v);
            if nb.len() == 1 && !reciprocal {
                candidates.push(vec![(v, nb[0])]);
            }
        }
        for c in 0..m {
            let out_star = (0..m).all(|v| v == c || sub.has_edge(c, v));
            let in_star = (0..m).all(|v| v == c || sub.has_edge(v, c));
            if out_star || in_star {
                candidates.push((0..m).filter(|&v| v != c).map(|v| (v, c)).collect());
            }
        }
        for a in 0..m {
            for b in sub.neighbors(a) {
                candidates.push(vec![(a, b)]);
            }
        }
        for moves in candidates {
            if let Some(forward) = attempt(&moves)? {
                let moves_orig: Vec<(usize, usize)> = moves.iter().map(|&(a, b)| (alive[a], alive[b])).collect();
                alive.retain(|v| !moves_orig.iter().any(|mv| mv.0 == *v));
                steps.push(RetractionStep { moves: moves_orig, forward });
                continue 'outer;
            }
        }
        break;
    }
    Ok(Contraction { vertex_count: n, steps, remaining: alive })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Digraph {
        Digraph::new(2, &[(0, 1), (1, 0)]).unwrap()
    }

    fn vm(v: &[usize], t: usize) -> VertexMap {
        VertexMap::new(v.to_vec(), t).unwrap()
    }

    #[test]
    fn one_step_examples() {
        let e = Digraph::new(2, &[(0, 1)]).unwrap();
        let id = VertexMap::identity(2);
        let cb = vm(&[1, 1], 2);
        assert!(one_step_a(&id, &cb, &e, &e).unwrap());
        assert!(one_step_dfl(&id, &cb, &e, &e).unwrap());
        let swap = vm(&[1, 0], 2);
        assert!(one_step_a(&id, &swap, &k2(), &k2()).unwrap());
        assert!(!one_step_dfl(&id, &swap, &k2(), &k2()).unwrap());
        assert!(!one_step_dfl_oracle(&id, &swap, &k2(), &k2()).unwrap());
        let two = Digraph::empty(2);
        assert!(!one_step_a(&id, &swap, &two, &two).unwrap());
        assert!(one_step_a(&swap, &id, &e, &e).is_err());
    }

    #[test]
    fn relative_variants() {
        let e = Digraph::new(2, &[(0, 1)]).unwrap();
        let id = VertexMap::identity(2);
        let cb = vm(&[1, 1], 2);
        assert_eq!(one_step_dfl_relative(&id, &cb, &e, &e, &[]).unwrap(), one_step_dfl(&id, &cb, &e, &e).unwrap());
        assert!(one_step_dfl_relative(&id, &cb, &e, &e, &[1]).unwrap());
        assert!(!one_step_dfl_relative(&id, &cb, &e, &e, &[0, 1]).unwrap());
    }

    #[test]
    fn search_on_reciprocal_pair() {
        let id = VertexMap::identity(2);
        let c = vm(&[0, 0], 2);
        let out = multi_step_search(&id, &c, &k2(), &k2(), &SystemKind::Dfl, 10_000).unwrap();
        assert!(matches!(out, SearchOutcome::Absent { .. }));
        let out = multi_step_search(&id, &c, &k2(), &k2(), &SystemKind::A, 10_000).unwrap();
        let SearchOutcome::Found(w) = out else { panic!("expected witness") };
        assert_eq!(w.len(), 1);
        w.verify(&SystemKind::A, &k2(), &k2()).unwrap();
        let out = multi_step_search(&id, &id, &k2(), &k2(), &SystemKind::Dfl, 0).unwrap();
        assert_eq!(out, SearchOutcome::Found(MultiStepWitness::trivial(id.clone())));
        let out = multi_step_search(&id, &c, &k2(), &k2(), &SystemKind::A, 0).unwrap();
        assert!(matches!(out, SearchOutcome::Inconclusive { .. }));
    }

    #[test]
    fn witness_json_round_trip() {
        let w = MultiStepWitness::new(vec![vm(&[0, 1], 2), vm(&[1, 1], 2), vm(&[0, 0], 2)], vec![true, false]).unwrap();
        let s = serde_json::to_string(&w.to_doc()).unwrap();
        let back = MultiStepWitness::from_doc(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, w);
        assert!(s.contains("\"backward\""));
    }

    #[test]
    fn retraction_checks() {
        // path 0 → 1 → 2; retract the leaf 2 onto 1
        let p = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let r = vm(&[0, 1, 1], 3);
        let w = check_dfl_deformation_retraction(&p, &[0, 1], &r).unwrap().unwrap();
        w.verify(&SystemKind::Dfl, &p, &p).unwrap();
        assert!(check_dfl_deformation_retraction(&p, &[0], &r).is_err());
        assert!(check_a_deformation_retraction(&p, &[0, 1, 2], &VertexMap::identity(3)).unwrap().is_some());
    }

    #[test]
    fn contraction_of_small_graphs() {
        let single = Digraph::empty(1);
        let c = greedy_contract(&single, &SystemKind::Dfl).unwrap();
        assert!(c.steps.is_empty() && c.reached_point());
        let c = greedy_contract(&k2(), &SystemKind::Dfl).unwrap();
        assert!(!c.reached_point());
        let c = greedy_contract(&k2(), &SystemKind::A).unwrap();
        assert!(c.reached_point());
        let cert = c.certificate(&k2()).unwrap();
        verify_certificate(&cert, &SystemKind::A).unwrap();
        verify_certificate(&EquivalenceCertificate::identity(&k2()), &SystemKind::Dfl).unwrap();
    }
}
