//! Automata constructions for the languages generated by semi-simple
//! splicing systems.
//!
//! Two routes are provided and kept language-equivalent:
//!
//! * the generic bridge construction: one small bridge automaton per marker,
//!   ε-transitions added iteratively until a fixpoint, then ε-elimination
//!   ([`iterative_eps_build`] / [`eliminate_eps`]);
//! * closed-form per-variant constructions that go straight to an ε-free
//!   NFA ((1,3), (2,4)), a closure-subset DFA ((2,3)) or a pair DFA ((1,4)).
//!
//! Both routes evaluate marker applicability through two per-letter
//! predicates of the initial DFA: a letter step is *useful* when its target
//! can still reach a final state, and a letter is *live* when some useful
//! state carries an incoming transition on it (equivalently, the letter
//! occurs in some word of the initial language). Markers chain: a junction
//! introduced by one marker can host the next splice, which the closed
//! forms account for by closing enabler sets and jump targets over the
//! marker graph through live letters.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::limits::ResourceLimits;
use crate::nfa::Nfa;
use crate::splicing::{Marker, SplicingSystem, Variant};
use crate::state_set::StateSet;
use crate::symbol::Symbol;

/// Role of a state in the intermediate ε-NFA.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// A state of the initial DFA.
    Base,
    /// Bridge entry state `i` of the marker with the given index.
    BridgeInitial(usize),
    /// Bridge middle state `p` ((1,4) only).
    BridgeMiddle(usize),
    /// Bridge exit state `t`.
    BridgeFinal(usize),
}

/// The bridge construction's intermediate automaton: the initial DFA plus
/// one bridge per marker plus the ε-edges added by the iterative builder.
#[derive(Debug, Clone)]
pub struct EpsNfa {
    system_variant: Variant,
    base: Dfa,
    states: usize,
    roles: Vec<Role>,
    markers: Vec<Marker>,
    letter_out: Vec<Vec<(Symbol, usize)>>,
    eps_out: Vec<Vec<usize>>,
    /// Number of rounds that added at least one ε-edge.
    iterations: usize,
}

impl EpsNfa {
    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn base_state_count(&self) -> usize {
        self.base.state_count()
    }

    pub fn role(&self, q: usize) -> Role {
        self.roles[q]
    }

    /// Rounds of the fixpoint iteration that added ε-edges.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn eps_edge_count(&self) -> usize {
        self.eps_out.iter().map(Vec::len).sum()
    }

    fn eps_closure(&self, seed: usize, out: &mut StateSet) {
        let mut work = VecDeque::from([seed]);
        out.insert(seed);
        while let Some(q) = work.pop_front() {
            for &r in &self.eps_out[q] {
                if !out.contains(r) {
                    out.insert(r);
                    work.push_back(r);
                }
            }
        }
    }
}

/// Letter liveness: `live[a]` iff `im δ_a` contains a useful state, i.e.
/// the letter occurs in some word of the initial language.
fn live_letters(dfa: &Dfa, useful: &StateSet) -> Vec<bool> {
    dfa.alphabet()
        .symbols()
        .map(|a| dfa.image(a).iter().any(|q| useful.contains(q)))
        .collect()
}

/// Builds the bridge ε-NFA for `system` and iterates the ε-edge rules to a
/// fixpoint.
///
/// Per round, for every marker `(a, b)`:
/// * an edge `q --ε--> i_(a,b)` is added when `q` is not a bridge exit and
///   `q` has an `a`-labelled transition to a state that is useful in the
///   current automaton;
/// * an edge `t_(a,b) --ε--> q` is added when `q` is not a bridge entry and
///   `q` has an incoming `b`-labelled transition; when `q` is itself a
///   bridge state this additionally requires `b` to be live, since a chain
///   through the bridge asserts that `b` occurs in a generated word.
pub fn iterative_eps_build(system: &SplicingSystem) -> EpsNfa {
    let dfa = system.initial().clone();
    let n = dfa.state_count();
    let variant = system.variant();
    let markers: Vec<Marker> = system.markers().to_vec();

    let mut roles = vec![Role::Base; n];
    let mut ids: Vec<(usize, Option<usize>, usize)> = Vec::new(); // (i, p?, t) per marker
    for (mi, _) in markers.iter().enumerate() {
        let i = roles.len();
        roles.push(Role::BridgeInitial(mi));
        let p = if variant == Variant::V14 {
            roles.push(Role::BridgeMiddle(mi));
            Some(i + 1)
        } else {
            None
        };
        let t = roles.len();
        roles.push(Role::BridgeFinal(mi));
        ids.push((i, p, t));
    }
    let states = roles.len();

    let mut letter_out: Vec<Vec<(Symbol, usize)>> = vec![Vec::new(); states];
    for q in 0..n {
        for a in dfa.alphabet().symbols() {
            letter_out[q].push((a, dfa.step(q, a)));
        }
    }
    let mut eps_out: Vec<Vec<usize>> = vec![Vec::new(); states];
    let mut eps_seen: HashSet<(usize, usize)> = HashSet::new();
    for (mi, m) in markers.iter().enumerate() {
        let (i, p, t) = ids[mi];
        match variant {
            Variant::V24 => letter_out[i].push((m.second, t)),
            Variant::V13 => letter_out[i].push((m.first, t)),
            Variant::V23 => {
                eps_out[i].push(t);
                eps_seen.insert((i, t));
            }
            Variant::V14 => {
                let p = p.unwrap();
                letter_out[i].push((m.first, p));
                letter_out[p].push((m.second, t));
            }
        }
    }

    let useful_base = dfa.useful_states();
    let live = live_letters(&dfa, &useful_base);

    // incoming letter edges never change during iteration: precompute
    let k = dfa.alphabet().len();
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); k];
    {
        let mut seen: Vec<HashSet<usize>> = vec![HashSet::new(); k];
        for q in 0..states {
            for &(a, r) in &letter_out[q] {
                if seen[a.index()].insert(r) {
                    incoming[a.index()].push(r);
                }
            }
        }
        for v in &mut incoming {
            v.sort_unstable();
        }
    }

    let mut iterations = 0;
    loop {
        let useful = useful_in(states, &letter_out, &eps_out, dfa.finals());
        let mut added = Vec::new();
        for (mi, m) in markers.iter().enumerate() {
            let (i_state, _, t_state) = ids[mi];
            // entry edges: q --ε--> i_(a,b)
            for q in 0..states {
                if matches!(roles[q], Role::BridgeFinal(_)) {
                    continue;
                }
                let enabled = letter_out[q]
                    .iter()
                    .any(|&(a, r)| a == m.first && useful.contains(r));
                if enabled && !eps_seen.contains(&(q, i_state)) {
                    added.push((q, i_state));
                }
            }
            // exit edges: t_(a,b) --ε--> q for q with incoming b
            for &q in &incoming[m.second.index()] {
                if matches!(roles[q], Role::BridgeInitial(_)) {
                    continue;
                }
                if roles[q] != Role::Base && !live[m.second.index()] {
                    continue;
                }
                if !eps_seen.contains(&(t_state, q)) {
                    added.push((t_state, q));
                }
            }
        }
        if added.is_empty() {
            break;
        }
        iterations += 1;
        for (s, d) in added {
            if eps_seen.insert((s, d)) {
                eps_out[s].push(d);
            }
        }
    }

    EpsNfa {
        system_variant: variant,
        base: dfa,
        states,
        roles,
        markers,
        letter_out,
        eps_out,
        iterations,
    }
}

/// Backward reachability of the final states over letter and ε edges.
fn useful_in(
    states: usize,
    letter_out: &[Vec<(Symbol, usize)>],
    eps_out: &[Vec<usize>],
    finals: &StateSet,
) -> StateSet {
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); states];
    for q in 0..states {
        for &(_, r) in &letter_out[q] {
            rev[r].push(q);
        }
        for &r in &eps_out[q] {
            rev[r].push(q);
        }
    }
    let mut useful = StateSet::empty(states);
    let mut work = VecDeque::new();
    for q in finals.iter() {
        useful.insert(q);
        work.push_back(q);
    }
    while let Some(q) = work.pop_front() {
        for &p in &rev[q] {
            if !useful.contains(p) {
                useful.insert(p);
                work.push_back(p);
            }
        }
    }
    useful
}

/// Removes the ε-transitions of a bridge automaton.
///
/// The result keeps exactly the initial DFA's states for variants (1,3),
/// (2,3) and (2,4). For (1,4) the bridge middles survive, merged by their
/// marker's first component, giving `n + |M₁|` states.
pub fn eliminate_eps(e: &EpsNfa) -> Nfa {
    let n = e.base.state_count();
    let m1: Vec<Symbol> = {
        let mut v: Vec<Symbol> = e.markers.iter().map(|m| m.first).collect();
        v.sort();
        v.dedup();
        v
    };
    let keep_middles = e.system_variant == Variant::V14;
    let out_states = if keep_middles { n + m1.len() } else { n };

    // projection of an intermediate state into the output NFA
    let project = |q: usize| -> Option<usize> {
        match e.roles[q] {
            Role::Base => Some(q),
            Role::BridgeMiddle(mi) if keep_middles => {
                let a = e.markers[mi].first;
                Some(n + m1.binary_search(&a).unwrap())
            }
            _ => None,
        }
    };
    // representative intermediate states of each output state
    let mut reps: Vec<Vec<usize>> = vec![Vec::new(); out_states];
    for q in 0..e.states {
        if let Some(o) = project(q) {
            reps[o].push(q);
        }
    }

    let mut closures: Vec<StateSet> = Vec::with_capacity(e.states);
    for q in 0..e.states {
        let mut cl = StateSet::empty(e.states);
        e.eps_closure(q, &mut cl);
        closures.push(cl);
    }

    let mut starts = StateSet::empty(out_states);
    for q in closures[e.base.start()].iter() {
        if let Some(o) = project(q) {
            starts.insert(o);
        }
    }
    let mut finals = StateSet::empty(out_states);
    for q in e.base.finals().iter() {
        finals.insert(q);
    }

    let mut nfa = Nfa::new(e.base.alphabet().clone(), out_states, starts, finals);
    for (o, sources) in reps.iter().enumerate() {
        for &s in sources {
            for p in closures[s].iter() {
                for &(a, r) in &e.letter_out[p] {
                    for t in closures[r].iter() {
                        if let Some(ot) = project(t) {
                            nfa.add_transition(o, a, ot);
                        }
                    }
                }
            }
        }
    }
    nfa
}

/// Per-letter chain enablers for the (2,4) ε-free form: `enablers[β]`
/// contains `α` iff a marker chain `α → ⋯ → β` exists whose intermediate
/// letters are all live. Reading `β` from a state with a useful
/// `α`-transition for such an `α` may jump to `im δ_β`.
fn chain_enablers(k: usize, markers: &[Marker], live: &[bool]) -> Vec<Vec<bool>> {
    let mut enablers = vec![vec![false; k]; k];
    for beta in 0..k {
        let mut work: VecDeque<usize> = VecDeque::new();
        for m in markers {
            if m.second.index() == beta && !enablers[beta][m.first.index()] {
                enablers[beta][m.first.index()] = true;
                work.push_back(m.first.index());
            }
        }
        while let Some(u) = work.pop_front() {
            if !live[u] {
                continue;
            }
            for m in markers {
                if m.second.index() == u && !enablers[beta][m.first.index()] {
                    enablers[beta][m.first.index()] = true;
                    work.push_back(m.first.index());
                }
            }
        }
    }
    enablers
}

/// Per-letter jump targets for the (1,3) ε-free form: the states that can
/// follow a `b`-occurrence in a generated word. `targets[b] = im δ_b`,
/// closed under `targets[b] ⊇ targets[c]` for `(b, c) ∈ M` when `b` is live.
fn jump_targets(dfa: &Dfa, markers: &[Marker], live: &[bool]) -> Vec<StateSet> {
    let mut targets: Vec<StateSet> = dfa.alphabet().symbols().map(|a| dfa.image(a)).collect();
    loop {
        let mut changed = false;
        for m in markers {
            let b = m.first.index();
            let c = m.second.index();
            if live[b] && !targets[c].is_subset_of(&targets[b]) {
                let add = targets[c].clone();
                targets[b].union_with(&add);
                changed = true;
            }
        }
        if !changed {
            return targets;
        }
    }
}

/// Direct ε-free NFA for a (2,4) system, on the initial DFA's state set.
///
/// `δ'(q, b) = {δ(q, b)} ∪ im δ_b` when some chain-enabler `a` of `b` has
/// `δ(q, a)` useful, else `{δ(q, b)}`.
pub fn construct_nfa_24(system: &SplicingSystem) -> Result<Nfa> {
    expect_variant(system, Variant::V24)?;
    let dfa = system.initial();
    let n = dfa.state_count();
    let k = dfa.alphabet().len();
    let useful = dfa.useful_states();
    let live = live_letters(dfa, &useful);
    let enablers = chain_enablers(k, system.markers(), &live);
    let images: Vec<StateSet> = dfa.alphabet().symbols().map(|a| dfa.image(a)).collect();

    let mut nfa = Nfa::new(
        dfa.alphabet().clone(),
        n,
        StateSet::singleton(n, dfa.start()),
        dfa.finals().clone(),
    );
    for q in 0..n {
        for b in dfa.alphabet().symbols() {
            nfa.add_transition(q, b, dfa.step(q, b));
            let jump = enablers[b.index()]
                .iter()
                .enumerate()
                .any(|(a, &en)| en && useful.contains(dfa.step(q, Symbol(a as u32))));
            if jump {
                nfa.add_transitions(q, b, &images[b.index()]);
            }
        }
    }
    Ok(nfa)
}

/// Direct ε-free NFA for a (1,3) system, on the initial DFA's state set.
///
/// `δ'(q, a) = {δ(q, a)} ∪ ⋃ { targets(b) : (a, b) ∈ M }` when `δ(q, a)` is
/// useful, else `{δ(q, a)}`; `targets` is the chain-closed jump-target map.
pub fn construct_nfa_13(system: &SplicingSystem) -> Result<Nfa> {
    expect_variant(system, Variant::V13)?;
    let dfa = system.initial();
    let n = dfa.state_count();
    let useful = dfa.useful_states();
    let live = live_letters(dfa, &useful);
    let targets = jump_targets(dfa, system.markers(), &live);

    // union of jump targets per first component
    let k = dfa.alphabet().len();
    let mut jump_of: Vec<Option<StateSet>> = vec![None; k];
    for m in system.markers() {
        let entry = jump_of[m.first.index()].get_or_insert_with(|| StateSet::empty(n));
        entry.union_with(&targets[m.second.index()]);
    }

    let mut nfa = Nfa::new(
        dfa.alphabet().clone(),
        n,
        StateSet::singleton(n, dfa.start()),
        dfa.finals().clone(),
    );
    for q in 0..n {
        for a in dfa.alphabet().symbols() {
            let t = dfa.step(q, a);
            nfa.add_transition(q, a, t);
            if useful.contains(t) {
                if let Some(jump) = &jump_of[a.index()] {
                    nfa.add_transitions(q, a, jump);
                }
            }
        }
    }
    Ok(nfa)
}

/// The (2,3) closure operator: the least superset `C` of `seed` such that
/// `q ∈ C`, `δ(q, a)` useful and `(a, b) ∈ M` imply `im δ_b ⊆ C`.
///
/// The returned set may include the sink (taken literally from `im δ_b`);
/// minimization absorbs the resulting `P` / `P ∪ {sink}` duplicates.
pub fn closure_23(system: &SplicingSystem, seed: &StateSet) -> Result<StateSet> {
    expect_variant(system, Variant::V23)?;
    Ok(closure_23_inner(
        system.initial(),
        system.markers(),
        &system.initial().useful_states(),
        seed.clone(),
    ))
}

fn closure_23_inner(dfa: &Dfa, markers: &[Marker], useful: &StateSet, seed: StateSet) -> StateSet {
    let mut closed = seed;
    let mut work: VecDeque<usize> = closed.iter().collect();
    while let Some(q) = work.pop_front() {
        for m in markers {
            if useful.contains(dfa.step(q, m.first)) {
                for r in dfa.image(m.second).iter() {
                    if !closed.contains(r) {
                        closed.insert(r);
                        work.push_back(r);
                    }
                }
            }
        }
    }
    closed
}

/// Subset DFA over closed subsets for a (2,3) system: the start state is
/// the closure of `{q₀}`, every step closes the pointwise image, and a
/// subset accepts iff it meets the final states.
pub fn construct_dfa_23(system: &SplicingSystem, limits: &ResourceLimits) -> Result<Dfa> {
    expect_variant(system, Variant::V23)?;
    let dfa = system.initial();
    let n = dfa.state_count();
    let k = dfa.alphabet().len();
    let useful = dfa.useful_states();
    let markers = system.markers();
    // cache per-marker images used by the closure
    let images: Vec<StateSet> = dfa.alphabet().symbols().map(|a| dfa.image(a)).collect();
    let close = |seed: StateSet| -> StateSet {
        let mut closed = seed;
        let mut work: VecDeque<usize> = closed.iter().collect();
        while let Some(q) = work.pop_front() {
            for m in markers {
                if useful.contains(dfa.step(q, m.first)) {
                    for r in images[m.second.index()].iter() {
                        if !closed.contains(r) {
                            closed.insert(r);
                            work.push_back(r);
                        }
                    }
                }
            }
        }
        closed
    };

    let start = close(StateSet::singleton(n, dfa.start()));
    let mut index: HashMap<StateSet, usize> = HashMap::new();
    let mut order = vec![start.clone()];
    index.insert(start, 0);
    let mut delta: Vec<usize> = Vec::new();
    let mut work = VecDeque::from([0usize]);
    while let Some(i) = work.pop_front() {
        let subset = order[i].clone();
        for a in 0..k as u32 {
            let mut img = StateSet::empty(n);
            for q in subset.iter() {
                img.insert(dfa.step(q, Symbol(a)));
            }
            let target = close(img);
            let id = match index.get(&target) {
                Some(&id) => id,
                None => {
                    let id = order.len();
                    if id >= limits.max_states {
                        return Err(Error::ResourceExceeded {
                            what: "closure-subset construction states",
                            used: id + 1,
                            limit: limits.max_states,
                            knob: "SPLICE_MAX_STATES",
                        });
                    }
                    index.insert(target.clone(), id);
                    order.push(target);
                    work.push_back(id);
                    id
                }
            };
            delta.push(id);
        }
    }
    let m = order.len();
    let finals: Vec<usize> = (0..m)
        .filter(|&i| order[i].intersects(dfa.finals()))
        .collect();
    Ok(Dfa::from_fn(dfa.alphabet().clone(), m, 0, &finals, |q, a| {
        delta[q * k + a.index()]
    }))
}

/// ε-free NFA for a (1,4) system on `Q ∪ {p_a : a ∈ M₁}`.
///
/// Base steps spawn the pending state `p_a` when `δ(q, a)` is useful; a
/// pending `p_x` fires on `a` with `(x, a) ∈ M`, jumping to `im δ_a` and
/// chaining into `p_a` when `a ∈ M₁` and `a` is live.
pub fn construct_nfa_14(system: &SplicingSystem) -> Result<Nfa> {
    expect_variant(system, Variant::V14)?;
    let dfa = system.initial();
    let n = dfa.state_count();
    let useful = dfa.useful_states();
    let live = live_letters(dfa, &useful);
    let m1 = system.m1();
    let pid = |a: Symbol| -> Option<usize> { m1.binary_search(&a).ok().map(|i| n + i) };
    let states = n + m1.len();

    let mut nfa = Nfa::new(
        dfa.alphabet().clone(),
        states,
        StateSet::singleton(states, dfa.start()),
        StateSet::from_iter(states, dfa.finals().iter()),
    );
    for q in 0..n {
        for a in dfa.alphabet().symbols() {
            let t = dfa.step(q, a);
            nfa.add_transition(q, a, t);
            if useful.contains(t) {
                if let Some(p) = pid(a) {
                    nfa.add_transition(q, a, p);
                }
            }
        }
    }
    for m in system.markers() {
        let px = pid(m.first).expect("first components are in M1");
        let im = dfa.image(m.second);
        for r in im.iter() {
            nfa.add_transition(px, m.second, r);
        }
        if live[m.second.index()] {
            if let Some(pb) = pid(m.second) {
                nfa.add_transition(px, m.second, pb);
            }
        }
    }
    Ok(nfa)
}

/// Pair DFA for a (1,4) system over `(subset, pending)` states.
///
/// The pending component records the last-read `M₁` symbol when that
/// occurrence can end the first operand of a splice: either its base step
/// was useful, or it was itself spliced in ( `(pending, a) ∈ M` fired) and
/// `a` is live. A fired step resets the subset to `im δ_a`.
pub fn construct_dfa_14(system: &SplicingSystem, limits: &ResourceLimits) -> Result<Dfa> {
    expect_variant(system, Variant::V14)?;
    let dfa = system.initial();
    let n = dfa.state_count();
    let k = dfa.alphabet().len();
    let useful = dfa.useful_states();
    let live = live_letters(dfa, &useful);
    let m1 = system.m1();
    let in_m1 = |a: Symbol| m1.binary_search(&a).is_ok();
    let marker_set: HashSet<(Symbol, Symbol)> = system
        .markers()
        .iter()
        .map(|m| (m.first, m.second))
        .collect();
    let images: Vec<StateSet> = dfa.alphabet().symbols().map(|a| dfa.image(a)).collect();

    type Pair = (StateSet, Option<Symbol>);
    let start: Pair = (StateSet::singleton(n, dfa.start()), None);
    let mut index: HashMap<Pair, usize> = HashMap::new();
    let mut order = vec![start.clone()];
    index.insert(start, 0);
    let mut delta: Vec<usize> = Vec::new();
    let mut work = VecDeque::from([0usize]);
    while let Some(i) = work.pop_front() {
        let (subset, pending) = order[i].clone();
        for a in 0..k as u32 {
            let a = Symbol(a);
            let fired = pending.map_or(false, |x| marker_set.contains(&(x, a)));
            let next_subset = if fired {
                images[a.index()].clone()
            } else {
                let mut img = StateSet::empty(n);
                for q in subset.iter() {
                    img.insert(dfa.step(q, a));
                }
                img
            };
            let step_useful = subset.iter().any(|q| useful.contains(dfa.step(q, a)));
            let next_pending = if in_m1(a) && (step_useful || (fired && live[a.index()])) {
                Some(a)
            } else {
                None
            };
            let key = (next_subset, next_pending);
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = order.len();
                    if id >= limits.max_states {
                        return Err(Error::ResourceExceeded {
                            what: "pair construction states",
                            used: id + 1,
                            limit: limits.max_states,
                            knob: "SPLICE_MAX_STATES",
                        });
                    }
                    index.insert(key.clone(), id);
                    order.push(key);
                    work.push_back(id);
                    id
                }
            };
            delta.push(id);
        }
    }
    let m = order.len();
    let finals: Vec<usize> = (0..m)
        .filter(|&i| order[i].0.intersects(dfa.finals()))
        .collect();
    Ok(Dfa::from_fn(dfa.alphabet().clone(), m, 0, &finals, |q, a| {
        delta[q * k + a.index()]
    }))
}

/// Which construction route to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConstructionPath {
    /// Variant-specific closed form (ε-free NFA / closure subsets / pair DFA).
    #[default]
    Direct,
    /// Bridge ε-NFA, iterated to fixpoint, ε-eliminated, then determinized.
    Iterative,
}

/// The un-minimized DFA recognizing `L(H)` along the chosen route.
pub fn construct_raw(
    system: &SplicingSystem,
    path: ConstructionPath,
    limits: &ResourceLimits,
) -> Result<Dfa> {
    match path {
        ConstructionPath::Iterative => {
            let nfa = eliminate_eps(&iterative_eps_build(system));
            nfa.subset_construct_bounded(limits.max_states)
        }
        ConstructionPath::Direct => match system.variant() {
            Variant::V24 => construct_nfa_24(system)?.subset_construct_bounded(limits.max_states),
            Variant::V13 => construct_nfa_13(system)?.subset_construct_bounded(limits.max_states),
            Variant::V23 => construct_dfa_23(system, limits),
            Variant::V14 => construct_dfa_14(system, limits),
        },
    }
}

/// Minimal complete DFA for the language generated by `system`, via the
/// variant's preferred (direct) route.
pub fn construct(system: &SplicingSystem, limits: &ResourceLimits) -> Result<Dfa> {
    Ok(construct_raw(system, ConstructionPath::Direct, limits)?.minimize())
}

fn expect_variant(system: &SplicingSystem, expected: Variant) -> Result<()> {
    if system.variant() != expected {
        return Err(Error::WrongVariant {
            expected: expected.code(),
            got: system.variant().code(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfa::PartialDfa;
    use crate::symbol::Alphabet;

    fn limits() -> ResourceLimits {
        ResourceLimits::default()
    }

    /// 0 -x-> 1 -b-> 2(final), 2 -a-> 1, everything else to the sink.
    /// With markers {(x,a),(a,b)} the (2,4) system generates the word `b`
    /// through a two-marker chain.
    fn chain_system() -> SplicingSystem {
        let alphabet = Alphabet::from_tokens(["x", "a", "b"]).unwrap();
        let x = alphabet.symbol("x").unwrap();
        let a = alphabet.symbol("a").unwrap();
        let b = alphabet.symbol("b").unwrap();
        let mut p = PartialDfa::new(alphabet, 3, 0);
        p.transitions = vec![(0, x, 1), (1, b, 2), (2, a, 1)];
        p.finals = vec![2];
        let dfa = p.complete().unwrap();
        SplicingSystem::new(
            Variant::V24,
            dfa,
            vec![Marker::new(x, a), Marker::new(a, b)],
        )
        .unwrap()
    }

    #[test]
    fn empty_marker_set_preserves_language() {
        let sys = chain_system();
        for variant in Variant::ALL {
            let empty = SplicingSystem::new(variant, sys.initial().clone(), vec![]).unwrap();
            let got = construct(&empty, &limits()).unwrap();
            assert!(got.equivalent(&sys.initial().minimize()).unwrap());
        }
    }

    #[test]
    fn chained_markers_generate_short_word() {
        let sys = chain_system();
        let direct = construct(&sys, &limits()).unwrap();
        assert!(direct.accepts_tokens("b").unwrap());
        let via_bridges = eliminate_eps(&iterative_eps_build(&sys))
            .subset_construct()
            .minimize();
        assert!(via_bridges.equivalent(&direct).unwrap());
    }

    #[test]
    fn eliminate_eps_keeps_base_states() {
        let sys = chain_system();
        let nfa = eliminate_eps(&iterative_eps_build(&sys));
        assert_eq!(nfa.state_count(), 3 + 1); // completion added a sink
    }

    #[test]
    fn no_markers_means_no_eps_edges() {
        let sys = chain_system();
        let empty = SplicingSystem::new(Variant::V24, sys.initial().clone(), vec![]).unwrap();
        let e = iterative_eps_build(&empty);
        assert_eq!(e.eps_edge_count(), 0);
        assert_eq!(e.iterations(), 0);
        let nfa = eliminate_eps(&e);
        assert!(nfa
            .subset_construct()
            .equivalent(&sys.initial().minimize().minimize())
            .unwrap());
    }

    #[test]
    fn wrong_variant_is_rejected() {
        let sys = chain_system();
        assert!(construct_nfa_13(&sys).is_err());
        assert!(construct_dfa_23(&sys, &limits()).is_err());
        assert!(construct_dfa_14(&sys, &limits()).is_err());
    }

    #[test]
    fn v13_aba_generates_a_ba_star() {
        let alphabet = Alphabet::from_tokens(["a", "b"]).unwrap();
        let a = alphabet.symbol("a").unwrap();
        let b = alphabet.symbol("b").unwrap();
        let mut p = PartialDfa::new(alphabet, 4, 0);
        p.transitions = vec![(0, a, 1), (1, b, 2), (2, a, 3)];
        p.finals = vec![3];
        let sys =
            SplicingSystem::new(Variant::V13, p.complete().unwrap(), vec![Marker::new(a, a)])
                .unwrap();
        let dfa = construct(&sys, &limits()).unwrap();
        for (w, want) in [
            ("a", true),
            ("a b a", true),
            ("a b a b a", true),
            ("", false),
            ("b a", false),
            ("a b", false),
            ("a a", false),
        ] {
            assert_eq!(dfa.accepts_tokens(w).unwrap(), want, "word {w:?}");
        }
        assert_eq!(dfa.state_count(), 3);
    }

    #[test]
    fn closure_23_is_extensive_monotone_idempotent() {
        let alphabet = Alphabet::from_tokens(["a", "b", "c"]).unwrap();
        let c = alphabet.symbol("c").unwrap();
        let a = alphabet.symbol("a").unwrap();
        let mut p = PartialDfa::new(alphabet, 4, 0);
        p.transitions = vec![(0, c, 1), (1, a, 2), (2, a, 3)];
        p.finals = vec![3];
        let sys =
            SplicingSystem::new(Variant::V23, p.complete().unwrap(), vec![Marker::new(a, c)])
                .unwrap();
        let n = sys.initial().state_count();
        let seed = StateSet::singleton(n, 1);
        let once = closure_23(&sys, &seed).unwrap();
        assert!(seed.is_subset_of(&once));
        let twice = closure_23(&sys, &once).unwrap();
        assert_eq!(once, twice);
        let mut bigger_seed = seed.clone();
        bigger_seed.insert(2);
        let bigger = closure_23(&sys, &bigger_seed).unwrap();
        assert!(once.is_subset_of(&bigger));
    }
}
