//! Graphs with uncertain actions: strategy and source complexes, action and
//! source relations, controllability and release-order obfuscation.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::complex::{conditional_association_relation, SimplicialComplex};
use crate::error::{Error, Result};
use crate::galois::{attribute_seq_ids, identifying_sequences, is_informative};
use crate::relation::Relation;

pub const DEFAULT_ACTION_BUDGET: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Deterministic,
    Nondeterministic,
    Stochastic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub id: String,
    pub source: usize,
    pub targets: Vec<usize>,
    pub kind: ActionKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncertainGraph {
    states: Vec<String>,
    actions: Vec<Action>,
    state_index: HashMap<String, usize>,
    action_index: HashMap<String, usize>,
}

impl UncertainGraph {
    pub fn new<S: AsRef<str>>(states: &[S], actions: &[(S, S, Vec<S>, ActionKind)]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::PreconditionViolated("graph needs at least one state".into()));
        }
        let mut state_index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if state_index.insert(s.as_ref().to_string(), i).is_some() {
                return Err(Error::DuplicateId { kind: "state", id: s.as_ref().to_string() });
            }
        }
        let lookup = |s: &str| state_index.get(s).copied().ok_or_else(|| Error::UnknownId { kind: "state", id: s.to_string() });
        let mut out = Vec::with_capacity(actions.len());
        let mut action_index = HashMap::new();
        for (id, src, tgts, kind) in actions {
            let id = id.as_ref().to_string();
            if tgts.is_empty() {
                return Err(Error::PreconditionViolated(format!("action {id} has no targets")));
            }
            if *kind == ActionKind::Deterministic && tgts.len() != 1 {
                return Err(Error::PreconditionViolated(format!("deterministic action {id} has {} targets", tgts.len())));
            }
            let mut targets = tgts.iter().map(|t| lookup(t.as_ref())).collect::<Result<Vec<_>>>()?;
            targets.sort_unstable();
            targets.dedup();
            if action_index.insert(id.clone(), out.len()).is_some() {
                return Err(Error::DuplicateId { kind: "action", id });
            }
            out.push(Action { id, source: lookup(src.as_ref())?, targets, kind: *kind });
        }
        Ok(UncertainGraph {
            states: states.iter().map(|s| s.as_ref().to_string()).collect(),
            actions: out,
            state_index,
            action_index,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, id: &str) -> Result<usize> {
        self.state_index.get(id).copied().ok_or_else(|| Error::UnknownId { kind: "state", id: id.to_string() })
    }

    pub fn action_index(&self, id: &str) -> Result<usize> {
        self.action_index.get(id).copied().ok_or_else(|| Error::UnknownId { kind: "action", id: id.to_string() })
    }

    pub fn action_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<FixedBitSet> {
        let idx = ids.iter().map(|s| self.action_index(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(bits::from_indices(self.actions.len(), idx))
    }

    pub fn action_ids(&self, set: &FixedBitSet) -> Vec<String> {
        set.ones().map(|a| self.actions[a].id.clone()).collect()
    }

    pub fn state_ids(&self, set: &FixedBitSet) -> Vec<String> {
        set.ones().map(|v| self.states[v].clone()).collect()
    }

    /// Start region of an action set.
    pub fn src(&self, set: &FixedBitSet) -> FixedBitSet {
        bits::from_indices(self.n_states(), set.ones().map(|a| self.actions[a].source))
    }

    fn has_stochastic(&self, set: &FixedBitSet) -> Option<usize> {
        set.ones().find(|&a| self.actions[a].kind == ActionKind::Stochastic)
    }

    /// Whether the action set can serve as a strategy. Without stochastic
    /// members this is acyclicity of the underlying edges (topological sort).
    /// Stochastic members use trap semantics: no nonempty state set W in
    /// which every state has a member action that stays in W (all targets in
    /// W for stochastic, some target in W otherwise).
    pub fn is_strategy(&self, set: &FixedBitSet) -> bool {
        if self.has_stochastic(set).is_none() {
            return self.is_acyclic(set);
        }
        let mut w = self.src(set);
        loop {
            let keep: Vec<usize> = w
                .ones()
                .filter(|&v| {
                    set.ones().any(|a| {
                        let act = &self.actions[a];
                        act.source == v
                            && match act.kind {
                                ActionKind::Stochastic => act.targets.iter().all(|&t| w.contains(t)),
                                _ => act.targets.iter().any(|&t| w.contains(t)),
                            }
                    })
                })
                .collect();
            if keep.len() == bits::count(&w) {
                return keep.is_empty();
            }
            w = bits::from_indices(self.n_states(), keep);
        }
    }

    fn is_acyclic(&self, set: &FixedBitSet) -> bool {
        let n = self.n_states();
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in set.ones() {
            let act = &self.actions[a];
            for &t in &act.targets {
                out[act.source].push(t);
                indeg[t] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &t in &out[v] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        seen == n
    }
}

#[derive(Clone, Debug)]
pub struct StrategyOptions {
    /// Accept stochastic actions under trap semantics.
    pub allow_stochastic: bool,
    pub action_budget: usize,
}

impl Default for StrategyOptions {
    fn default() -> Self {
        StrategyOptions { allow_stochastic: false, action_budget: DEFAULT_ACTION_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalStrategy {
    pub id: String,
    pub actions: FixedBitSet,
    pub sources: FixedBitSet,
    pub goal: FixedBitSet,
}

/// The maximal strategies of a graph, named s1, s2, ... ordered by goal size,
/// goal states, then actions.
#[derive(Clone, Debug)]
pub struct StrategySpace {
    pub graph: UncertainGraph,
    pub strategies: Vec<MaximalStrategy>,
}

pub fn strategy_space(g: &UncertainGraph, opts: &StrategyOptions) -> Result<StrategySpace> {
    if !opts.allow_stochastic {
        if let Some(a) = g.actions.iter().find(|a| a.kind == ActionKind::Stochastic) {
            return Err(Error::StochasticUnsupported(a.id.clone()));
        }
    }
    let m = g.actions.len();
    if m > opts.action_budget {
        return Err(Error::TooLarge { what: "action count", limit: opts.action_budget as u64 });
    }
    let mut found: Vec<FixedBitSet> = Vec::new();
    let mut cur = bits::empty(m);
    fn rec(g: &UncertainGraph, k: usize, cur: &mut FixedBitSet, found: &mut Vec<FixedBitSet>) {
        if k == g.actions.len() {
            let maximal = (0..k).filter(|&a| !cur.contains(a)).all(|a| !g.is_strategy(&bits::with(cur, a)));
            if maximal {
                found.push(cur.clone());
            }
            return;
        }
        cur.insert(k);
        if g.is_strategy(cur) {
            rec(g, k + 1, cur, found);
        }
        cur.set(k, false);
        rec(g, k + 1, cur, found);
    }
    rec(g, 0, &mut cur, &mut found);
    let mut strategies: Vec<MaximalStrategy> = found
        .into_iter()
        .map(|actions| {
            let sources = g.src(&actions);
            let goal = bits::minus(&bits::full(g.n_states()), &sources);
            MaximalStrategy { id: String::new(), actions, sources, goal }
        })
        .collect();
    strategies.sort_by_key(|s| (bits::count(&s.goal), bits::to_vec(&s.goal), bits::to_vec(&s.actions)));
    for (i, s) in strategies.iter_mut().enumerate() {
        s.id = format!("s{}", i + 1);
    }
    Ok(StrategySpace { graph: g.clone(), strategies })
}

/// The strategy complex with default options.
pub fn strategy_complex(g: &UncertainGraph) -> Result<SimplicialComplex> {
    Ok(strategy_space(g, &StrategyOptions::default())?.complex())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyIars {
    pub strategy: String,
    pub max_length: usize,
    /// Top-down lattice chains of maximal length, as element labels.
    pub chains: Vec<Vec<String>>,
    pub sequences: Vec<Vec<String>>,
}

impl StrategySpace {
    fn action_universe(&self) -> Vec<String> {
        self.graph.actions.iter().map(|a| a.id.clone()).collect()
    }

    /// Only the empty strategy exists.
    pub fn is_degenerate(&self) -> bool {
        self.strategies.len() == 1 && self.strategies[0].actions.is_clear()
    }

    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::new(self.action_universe(), self.strategies.iter().map(|s| s.actions.clone()).collect())
            .expect("strategies are sets over the action universe")
    }

    /// Rows are maximal strategies, columns the actions used by some strategy.
    pub fn action_relation(&self) -> Relation {
        let used: Vec<usize> = (0..self.graph.actions.len())
            .filter(|&a| self.strategies.iter().any(|s| s.actions.contains(a)))
            .collect();
        let rows = self
            .strategies
            .iter()
            .map(|s| bits::from_indices(used.len(), used.iter().enumerate().filter(|&(_, &a)| s.actions.contains(a)).map(|(j, _)| j)))
            .collect();
        Relation::from_bits(
            self.strategies.iter().map(|s| s.id.clone()).collect(),
            used.iter().map(|&a| self.graph.actions[a].id.clone()).collect(),
            rows,
        )
        .expect("ids are distinct")
    }

    /// Rows are maximal strategies, columns the states, entries the sources.
    pub fn source_relation(&self) -> Relation {
        Relation::from_bits(
            self.strategies.iter().map(|s| s.id.clone()).collect(),
            self.graph.states.clone(),
            self.strategies.iter().map(|s| s.sources.clone()).collect(),
        )
        .expect("ids are distinct")
    }

    pub fn source_complex(&self) -> SimplicialComplex {
        SimplicialComplex::new(self.graph.states.clone(), self.strategies.iter().map(|s| s.sources.clone()).collect())
            .expect("sources are sets over the states")
    }

    /// Every (n-1)-subset of the states is the start region of a strategy.
    pub fn fully_controllable(&self) -> bool {
        self.source_complex().same_simplices(&SimplicialComplex::boundary_complex(&self.graph.states))
    }

    pub fn strategy(&self, id: &str) -> Result<&MaximalStrategy> {
        self.strategies.iter().find(|s| s.id == id).ok_or_else(|| Error::UnknownId { kind: "strategy", id: id.to_string() })
    }

    /// Maximal strategy with exactly these actions.
    pub fn find(&self, actions: &FixedBitSet) -> Option<&MaximalStrategy> {
        self.strategies.iter().find(|s| &s.actions == actions)
    }

    /// The link relation Lk(Psi_A, s) whose lattice governs release of s.
    pub fn link_relation(&self, id: &str) -> Result<crate::complex::LinkRelation> {
        let a = self.action_relation();
        let i = a.individual_index(id)?;
        Ok(conditional_association_relation(&a, &bits::from_indices(a.n_individuals(), [i])))
    }

    /// Longest informative action release sequences identifying a maximal
    /// strategy, with the lattice chains realising them.
    pub fn strategy_iars(&self, actions: &FixedBitSet, cap: usize) -> Result<StrategyIars> {
        let s = self.find(actions).ok_or_else(|| Error::NotMaximal("not a maximal strategy".into()))?;
        let a = self.action_relation();
        let i = a.individual_index(&s.id)?;
        let found = identifying_sequences(&a, &bits::from_indices(a.n_individuals(), [i]), cap)?;
        Ok(StrategyIars {
            strategy: s.id.clone(),
            max_length: found.max_length,
            chains: found.chains.iter().map(|c| c.iter().map(|&e| found.lattice.elements[e].label(&a)).collect()).collect(),
            sequences: found.sequences.iter().map(|q| attribute_seq_ids(&a, q)).collect(),
        })
    }

    /// Condition (ii) of delayed goal recognition for every prefix, and
    /// completeness for `v` of the full sequence.
    pub fn verify_goal_delay(&self, v: usize, seq: &[usize]) -> bool {
        let n = self.graph.n_states();
        let all = bits::full(n);
        let tau = bits::from_indices(self.graph.actions.len(), seq.iter().copied());
        let complete = seq.len() == n - 1
            && bits::count(&tau) == seq.len()
            && self.graph.is_strategy(&tau)
            && self.graph.src(&tau) == bits::without(&all, v);
        if !complete {
            return false;
        }
        (1..=seq.len()).all(|i| self.prefix_open(&seq[..i]))
    }

    /// Every state outside the prefix's start region is still the goal of
    /// some complete strategy extending the prefix.
    fn prefix_open(&self, prefix: &[usize]) -> bool {
        let n = self.graph.n_states();
        let tau = bits::from_indices(self.graph.actions.len(), prefix.iter().copied());
        let w = self.graph.src(&tau);
        let all = bits::full(n);
        (0..n).filter(|&v| !w.contains(v)).all(|v| {
            let need = bits::without(&all, v);
            self.strategies.iter().any(|m| tau.is_subset(&m.actions) && need.is_subset(&m.sources))
        })
    }

    /// A release order a_1..a_{n-1} that is a complete strategy for `v` while
    /// keeping every other state outside the released start region possible
    /// as the goal. Found by depth-first search over prefixes.
    pub fn goal_delay_sequence(&self, v: &str) -> Result<Vec<String>> {
        let v = self.graph.state_index(v)?;
        if !self.fully_controllable() {
            return Err(Error::NotControllable);
        }
        let n = self.graph.n_states();
        if n < 2 {
            return Err(Error::PreconditionViolated("needs at least two states".into()));
        }
        let mut seq = Vec::new();
        if self.delay_search(v, &mut seq) {
            debug_assert!(self.verify_goal_delay(v, &seq));
            Ok(seq.iter().map(|&a| self.graph.actions[a].id.clone()).collect())
        } else {
            Err(Error::PreconditionViolated("no delaying sequence found".into()))
        }
    }

    fn delay_search(&self, v: usize, seq: &mut Vec<usize>) -> bool {
        let n = self.graph.n_states();
        if seq.len() == n - 1 {
            return self.verify_goal_delay(v, seq);
        }
        let used = self.graph.src(&bits::from_indices(self.graph.actions.len(), seq.iter().copied()));
        for a in 0..self.graph.actions.len() {
            let src = self.graph.actions[a].source;
            if src == v || used.contains(src) {
                continue;
            }
            seq.push(a);
            if self.prefix_open(seq) && self.delay_search(v, seq) {
                return true;
            }
            seq.pop();
        }
        false
    }

    /// The release order b_{n-1}, ..., b_1 built from a Hamiltonian cycle of
    /// deterministic (or stochastic) actions.
    pub fn hamiltonian_iars(&self, sigma: &FixedBitSet, cycle: &[String]) -> Result<Vec<String>> {
        let g = &self.graph;
        let n = g.n_states();
        if n < 2 || cycle.len() != n {
            return Err(Error::NotHamiltonian(format!("expected {n} actions")));
        }
        let cyc = cycle.iter().map(|c| g.action_index(c)).collect::<Result<Vec<_>>>()?;
        let srcs = bits::from_indices(n, cyc.iter().map(|&a| g.actions[a].source));
        if bits::count(&srcs) != n {
            return Err(Error::NotHamiltonian("sources repeat".into()));
        }
        for (k, &a) in cyc.iter().enumerate() {
            let act = &g.actions[a];
            if act.kind == ActionKind::Nondeterministic {
                return Err(Error::NotHamiltonian(format!("{} is nondeterministic", act.id)));
            }
            let next = g.actions[cyc[(k + 1) % n]].source;
            if !act.targets.contains(&next) {
                return Err(Error::NotHamiltonian(format!("{} does not lead to the next source", act.id)));
            }
        }
        let s = self.find(sigma).ok_or_else(|| Error::NotMaximal("not a maximal strategy".into()))?;
        if bits::count(&s.goal) != 1 {
            return Err(Error::NotComplete);
        }
        let v = s.goal.ones().next().expect("one goal");
        // rotate so the last cycle action starts at v
        let pos = cyc.iter().position(|&a| g.actions[a].source == v).expect("cycle covers v");
        let order: Vec<usize> = (1..=n).map(|k| cyc[(pos + k) % n]).collect();
        let b: Vec<usize> = order[..n - 1]
            .iter()
            .map(|&a| {
                let st = g.actions[a].source;
                s.actions.ones().find(|&x| g.actions[x].source == st).expect("complete strategy acts at every other state")
            })
            .collect();
        let release: Vec<usize> = b.into_iter().rev().collect();
        let ar = self.action_relation();
        let cols = release
            .iter()
            .map(|&x| ar.attribute_index(&g.actions[x].id))
            .collect::<Result<Vec<_>>>()?;
        if !is_informative(&ar, &cols) {
            return Err(Error::PreconditionViolated("release order is not informative".into()));
        }
        Ok(release.iter().map(|&x| g.actions[x].id.clone()).collect())
    }
}

fn graph<const N: usize>(states: &[&str], actions: [(&str, &str, &[&str], ActionKind); N]) -> UncertainGraph {
    let acts: Vec<(&str, &str, Vec<&str>, ActionKind)> = actions.iter().map(|(i, s, t, k)| (*i, *s, t.to_vec(), *k)).collect();
    UncertainGraph::new(states, &acts).expect("fixture graph")
}

use ActionKind::{Deterministic as Det, Nondeterministic as Nondet, Stochastic as Stoch};

/// Three states; a3 is the only nondeterministic action.
pub fn graph_214() -> UncertainGraph {
    graph(
        &["1", "2", "3"],
        [
            ("a1", "1", &["3"], Det),
            ("a2", "2", &["3"], Det),
            ("a3", "3", &["1", "2"], Nondet),
            ("a4", "2", &["1"], Det),
            ("a5", "1", &["2"], Det),
        ],
    )
}

/// Four states, a deterministic 3-cycle plus nondeterministic escapes.
pub fn graph_202() -> UncertainGraph {
    graph(
        &["1", "2", "3", "4"],
        [
            ("e1", "1", &["2"], Det),
            ("e2", "2", &["3"], Det),
            ("e3", "3", &["1"], Det),
            ("a1", "1", &["3", "4"], Nondet),
            ("a2", "2", &["4"], Det),
            ("a3", "3", &["2", "4"], Nondet),
            ("b4", "4", &["1", "2", "3"], Nondet),
        ],
    )
}

/// Five states with one stochastic action d1.
pub fn graph_238() -> UncertainGraph {
    graph(
        &["1", "2", "3", "4", "5"],
        [
            ("a1", "1", &["2", "3", "4"], Nondet),
            ("a2", "2", &["5"], Det),
            ("a3", "3", &["5"], Det),
            ("a4", "4", &["5"], Det),
            ("d1", "1", &["2", "3", "4"], Stoch),
            ("b2", "2", &["1"], Det),
            ("b3", "3", &["1"], Det),
            ("b4", "4", &["1"], Det),
            ("b5", "5", &["2", "3", "4"], Nondet),
        ],
    )
}

/// A deterministic 3-cycle c1 c2 c3 with one chord d1: 1 -> 3.
pub fn cycle_graph_3() -> UncertainGraph {
    graph(
        &["1", "2", "3"],
        [("c1", "1", &["2"], Det), ("c2", "2", &["3"], Det), ("c3", "3", &["1"], Det), ("d1", "1", &["3"], Det)],
    )
}
