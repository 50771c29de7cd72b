use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::state_set::StateSet;
use crate::symbol::{Alphabet, Symbol};

/// A complete deterministic finite automaton.
///
/// States are dense indices `0..n`. The transition table is total: every
/// `(state, symbol)` pair has a successor. Instances are immutable once
/// built; operations return new automata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    /// Row-major table: `delta[q * k + a]`.
    delta: Vec<usize>,
    start: usize,
    finals: StateSet,
}

/// A possibly-incomplete DFA under construction. [`PartialDfa::complete`]
/// turns it into a total [`Dfa`], adding at most one sink state.
#[derive(Debug, Clone)]
pub struct PartialDfa {
    pub alphabet: Alphabet,
    pub states: usize,
    pub start: usize,
    pub finals: Vec<usize>,
    /// `(state, symbol, target)` triples; later entries win on duplicates.
    pub transitions: Vec<(usize, Symbol, usize)>,
}

impl PartialDfa {
    pub fn new(alphabet: Alphabet, states: usize, start: usize) -> Self {
        PartialDfa {
            alphabet,
            states,
            start,
            finals: Vec::new(),
            transitions: Vec::new(),
        }
    }

    /// Completes the table, routing every undefined transition to a sink.
    /// A sink state is appended only when some transition is missing; an
    /// already-complete table is returned unchanged.
    pub fn complete(self) -> Result<Dfa> {
        let k = self.alphabet.len();
        if self.start >= self.states {
            return Err(Error::InvalidSystem(format!(
                "start state {} out of range (states: {})",
                self.start, self.states
            )));
        }
        for &f in &self.finals {
            if f >= self.states {
                return Err(Error::InvalidSystem(format!(
                    "final state {f} out of range (states: {})",
                    self.states
                )));
            }
        }
        let mut table = vec![usize::MAX; self.states * k];
        for (q, a, r) in &self.transitions {
            if *q >= self.states || *r >= self.states {
                return Err(Error::InvalidSystem(format!(
                    "transition ({q}, {}, {r}) out of range",
                    self.alphabet.token(*a)
                )));
            }
            table[q * k + a.index()] = *r;
        }
        let incomplete = table.iter().any(|&t| t == usize::MAX);
        let n = if incomplete { self.states + 1 } else { self.states };
        let sink = self.states;
        let mut delta = Vec::with_capacity(n * k);
        for q in 0..self.states {
            for a in 0..k {
                let t = table[q * k + a];
                delta.push(if t == usize::MAX { sink } else { t });
            }
        }
        if incomplete {
            delta.extend(std::iter::repeat(sink).take(k));
        }
        Ok(Dfa {
            finals: StateSet::from_iter(n, self.finals.iter().copied()),
            alphabet: self.alphabet,
            delta,
            start: self.start,
        })
    }
}

impl Dfa {
    /// Builds a complete DFA directly from a total transition function.
    pub fn from_fn<F>(alphabet: Alphabet, states: usize, start: usize, finals: &[usize], f: F) -> Dfa
    where
        F: Fn(usize, Symbol) -> usize,
    {
        let k = alphabet.len();
        let mut delta = Vec::with_capacity(states * k);
        for q in 0..states {
            for a in 0..k as u32 {
                let t = f(q, Symbol(a));
                assert!(t < states, "transition target out of range");
                delta.push(t);
            }
        }
        Dfa {
            finals: StateSet::from_iter(states, finals.iter().copied()),
            alphabet,
            delta,
            start,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        if self.alphabet.len() == 0 {
            // A DFA over the empty alphabet still has its states; the table
            // is empty so the count is tracked via the finals width.
            return self.finals.width();
        }
        self.delta.len() / self.alphabet.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn finals(&self) -> &StateSet {
        &self.finals
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(q)
    }

    #[inline]
    pub fn step(&self, q: usize, a: Symbol) -> usize {
        self.delta[q * self.alphabet.len() + a.index()]
    }

    /// The states from which some word reaches a final state.
    pub fn useful_states(&self) -> StateSet {
        let n = self.state_count();
        let k = self.alphabet.len();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..k {
                rev[self.delta[q * k + a]].push(q);
            }
        }
        let mut useful = self.finals.clone();
        let mut work: VecDeque<usize> = self.finals.iter().collect();
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

    /// States reachable from the start state.
    pub fn reachable_states(&self) -> StateSet {
        let n = self.state_count();
        let k = self.alphabet.len();
        let mut seen = StateSet::singleton(n, self.start);
        let mut work = VecDeque::from([self.start]);
        while let Some(q) = work.pop_front() {
            for a in 0..k {
                let t = self.delta[q * k + a];
                if !seen.contains(t) {
                    seen.insert(t);
                    work.push_back(t);
                }
            }
        }
        seen
    }

    /// `im δ_a`: the set of states with an incoming `a`-transition.
    pub fn image(&self, a: Symbol) -> StateSet {
        let n = self.state_count();
        let k = self.alphabet.len();
        let mut im = StateSet::empty(n);
        for q in 0..n {
            im.insert(self.delta[q * k + a.index()]);
        }
        im
    }

    /// `im δ_a` looked up by token; unknown tokens are an error.
    pub fn image_of_token(&self, token: &str) -> Result<StateSet> {
        Ok(self.image(self.alphabet.symbol(token)?))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut q = self.start;
        for &a in word {
            q = self.step(q, a);
        }
        self.finals.contains(q)
    }

    /// Membership with token-level lookup; unknown symbols are an error.
    pub fn accepts_tokens(&self, word: &str) -> Result<bool> {
        Ok(self.accepts(&self.alphabet.parse_word(word)?))
    }

    /// All accepted words of length at most `max_len`, in lexicographic
    /// (radix-tree) order with respect to alphabet order.
    ///
    /// Subtrees rooted at useless states are pruned, so the cost is
    /// proportional to the number of produced words times the alphabet size.
    pub fn enumerate_accepted(&self, max_len: usize) -> Vec<Vec<Symbol>> {
        let useful = self.useful_states();
        let mut out = Vec::new();
        let mut word: Vec<Symbol> = Vec::new();
        self.enumerate_rec(self.start, max_len, &useful, &mut word, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        q: usize,
        remaining: usize,
        useful: &StateSet,
        word: &mut Vec<Symbol>,
        out: &mut Vec<Vec<Symbol>>,
    ) {
        if self.finals.contains(q) {
            out.push(word.clone());
        }
        if remaining == 0 {
            return;
        }
        for a in self.alphabet.symbols() {
            let t = self.step(q, a);
            if useful.contains(t) || self.finals.contains(t) {
                word.push(a);
                self.enumerate_rec(t, remaining - 1, useful, word, out);
                word.pop();
            }
        }
    }

    /// Language equality via synchronous product traversal.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.tokens().to_vec(),
                right: other.alphabet.tokens().to_vec(),
            });
        }
        let k = self.alphabet.len();
        let mut seen = std::collections::HashSet::new();
        let mut work = VecDeque::from([(self.start, other.start)]);
        seen.insert((self.start, other.start));
        while let Some((p, q)) = work.pop_front() {
            if self.finals.contains(p) != other.finals.contains(q) {
                return Ok(false);
            }
            for a in 0..k {
                let pair = (self.delta[p * k + a], other.delta[q * k + a]);
                if seen.insert(pair) {
                    work.push_back(pair);
                }
            }
        }
        Ok(true)
    }

    /// `L(self) ⊆ L(other)` via the same product traversal.
    pub fn language_subset_of(&self, other: &Dfa) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.tokens().to_vec(),
                right: other.alphabet.tokens().to_vec(),
            });
        }
        let k = self.alphabet.len();
        let mut seen = std::collections::HashSet::new();
        let mut work = VecDeque::from([(self.start, other.start)]);
        seen.insert((self.start, other.start));
        while let Some((p, q)) = work.pop_front() {
            if self.finals.contains(p) && !other.finals.contains(q) {
                return Ok(false);
            }
            for a in 0..k {
                let pair = (self.delta[p * k + a], other.delta[q * k + a]);
                if seen.insert(pair) {
                    work.push_back(pair);
                }
            }
        }
        Ok(true)
    }

    /// `true` when the accepted language is finite: no cycle is reachable
    /// from the start among useful states.
    pub fn has_finite_language(&self) -> bool {
        let useful = self.useful_states();
        let reachable = self.reachable_states();
        let n = self.state_count();
        let k = self.alphabet.len();
        // iterative DFS with colors over reachable & useful states
        let mut color = vec![0u8; n]; // 0 = white, 1 = on stack, 2 = done
        for root in 0..n {
            if color[root] != 0 || !reachable.contains(root) || !useful.contains(root) {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            color[root] = 1;
            while let Some(&mut (q, ref mut next)) = stack.last_mut() {
                if *next == k {
                    color[q] = 2;
                    stack.pop();
                    continue;
                }
                let t = self.delta[q * k + *next];
                *next += 1;
                if !useful.contains(t) || !reachable.contains(t) {
                    continue;
                }
                match color[t] {
                    0 => {
                        color[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// Minimal complete DFA for the same language.
    ///
    /// Unreachable states are dropped, equivalent states are merged by
    /// Hopcroft partition refinement, and the result is renumbered by BFS
    /// from the start state (symbols in alphabet order), so two calls on
    /// language-equal DFAs over the same alphabet produce identical tables.
    pub fn minimize(&self) -> Dfa {
        let restricted = self.restrict_to_reachable();
        let partition = hopcroft(&restricted);
        restricted.quotient(&partition).canonicalize()
    }

    fn restrict_to_reachable(&self) -> Dfa {
        let reach = self.reachable_states();
        let n = self.state_count();
        if reach.len() == n {
            return self.clone();
        }
        let k = self.alphabet.len();
        let mut map = vec![usize::MAX; n];
        for (new, old) in reach.iter().enumerate() {
            map[old] = new;
        }
        let m = reach.len();
        let mut delta = Vec::with_capacity(m * k);
        for old in reach.iter() {
            for a in 0..k {
                delta.push(map[self.delta[old * k + a]]);
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            start: map[self.start],
            finals: StateSet::from_iter(
                m,
                self.finals
                    .iter()
                    .filter(|&q| reach.contains(q))
                    .map(|q| map[q]),
            ),
        }
    }

    fn quotient(&self, class_of: &[usize]) -> Dfa {
        let k = self.alphabet.len();
        let m = class_of.iter().copied().max().map_or(0, |c| c + 1);
        let mut delta = vec![usize::MAX; m * k];
        let mut finals = StateSet::empty(m);
        for q in 0..self.state_count() {
            let c = class_of[q];
            if self.finals.contains(q) {
                finals.insert(c);
            }
            for a in 0..k {
                delta[c * k + a] = class_of[self.delta[q * k + a]];
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            start: class_of[self.start],
            finals,
        }
    }

    fn canonicalize(&self) -> Dfa {
        let n = self.state_count();
        let k = self.alphabet.len();
        let mut order = vec![usize::MAX; n];
        let mut next = 0;
        let mut work = VecDeque::from([self.start]);
        order[self.start] = {
            next += 1;
            0
        };
        while let Some(q) = work.pop_front() {
            for a in 0..k {
                let t = self.delta[q * k + a];
                if order[t] == usize::MAX {
                    order[t] = next;
                    next += 1;
                    work.push_back(t);
                }
            }
        }
        debug_assert_eq!(next, n, "minimized DFA must be reachable");
        let mut delta = vec![usize::MAX; n * k];
        let mut finals = StateSet::empty(n);
        for q in 0..n {
            let nq = order[q];
            if self.finals.contains(q) {
                finals.insert(nq);
            }
            for a in 0..k {
                delta[nq * k + a] = order[self.delta[q * k + a]];
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            start: 0,
            finals,
        }
    }
}

/// Hopcroft's partition refinement. Returns the class index of every state;
/// class indices are contiguous from 0.
fn hopcroft(dfa: &Dfa) -> Vec<usize> {
    let n = dfa.state_count();
    let k = dfa.alphabet.len();
    if n == 0 {
        return Vec::new();
    }
    // reverse edges, grouped by symbol
    let mut rev: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; k];
    for q in 0..n {
        for a in 0..k {
            rev[a][dfa.delta[q * k + a]].push(q);
        }
    }

    // partition as a vector of blocks; block membership per state
    let finals: Vec<usize> = dfa.finals.iter().collect();
    let nonfinals: Vec<usize> = (0..n).filter(|q| !dfa.finals.contains(*q)).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0usize; n];
    for group in [finals, nonfinals] {
        if group.is_empty() {
            continue;
        }
        for &q in &group {
            block_of[q] = blocks.len();
        }
        blocks.push(group);
    }

    let mut worklist: VecDeque<(usize, usize)> = VecDeque::new();
    let mut in_work = vec![vec![false; k]; blocks.len().max(1)];
    for b in 0..blocks.len() {
        for a in 0..k {
            worklist.push_back((b, a));
            in_work[b][a] = true;
        }
    }

    let mut touched: Vec<usize> = Vec::new();
    let mut touch_count = vec![0usize; n.max(1)];
    while let Some((b, a)) = worklist.pop_front() {
        in_work[b][a] = false;
        // states with an a-transition into block b
        touched.clear();
        let mut touched_blocks: Vec<usize> = Vec::new();
        // snapshot: block b may be rewritten during splits of *other* blocks
        for &t in blocks[b].clone().iter() {
            for &p in &rev[a][t] {
                if touch_count[p] == 0 {
                    touched.push(p);
                }
                touch_count[p] += 1;
            }
        }
        let mut marks: Vec<Vec<usize>> = vec![Vec::new(); blocks.len()];
        for &p in &touched {
            let bp = block_of[p];
            if marks[bp].is_empty() {
                touched_blocks.push(bp);
            }
            marks[bp].push(p);
        }
        for &bp in &touched_blocks {
            if marks[bp].len() == blocks[bp].len() {
                continue; // no split
            }
            let moved = std::mem::take(&mut marks[bp]);
            let new_block = blocks.len();
            blocks[bp].retain(|q| touch_count[*q] == 0);
            for &q in &moved {
                block_of[q] = new_block;
            }
            blocks.push(moved);
            in_work.push(vec![false; k]);
            for c in 0..k {
                if in_work[bp][c] {
                    worklist.push_back((new_block, c));
                    in_work[new_block][c] = true;
                } else {
                    // enqueue the smaller part
                    let (small, large) = if blocks[new_block].len() <= blocks[bp].len() {
                        (new_block, bp)
                    } else {
                        (bp, new_block)
                    };
                    let _ = large;
                    worklist.push_back((small, c));
                    in_work[small][c] = true;
                }
            }
        }
        for &p in &touched {
            touch_count[p] = 0;
        }
    }

    // renumber blocks contiguously in discovery order of states
    let mut remap = vec![usize::MAX; blocks.len()];
    let mut next = 0;
    let mut class_of = vec![0usize; n];
    for q in 0..n {
        let b = block_of[q];
        if remap[b] == usize::MAX {
            remap[b] = next;
            next += 1;
        }
        class_of[q] = remap[b];
    }
    class_of
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> Dfa {
        let alphabet = Alphabet::from_tokens(["a", "b"]).unwrap();
        let mut p = PartialDfa::new(alphabet.clone(), 2, 0);
        let a = alphabet.symbol("a").unwrap();
        let b = alphabet.symbol("b").unwrap();
        p.transitions = vec![(0, a, 1), (0, b, 0), (1, a, 1), (1, b, 0)];
        p.finals = vec![1];
        p.complete().unwrap()
    }

    #[test]
    fn complete_leaves_total_dfa_unchanged() {
        let d = two_state();
        assert_eq!(d.state_count(), 2);
    }

    #[test]
    fn complete_adds_single_sink() {
        let alphabet = Alphabet::from_tokens(["a"]).unwrap();
        let mut p = PartialDfa::new(alphabet, 1, 0);
        p.finals = vec![0];
        let d = p.complete().unwrap();
        assert_eq!(d.state_count(), 2);
        let a = d.alphabet().symbol("a").unwrap();
        assert_eq!(d.step(0, a), 1);
        assert_eq!(d.step(1, a), 1);
    }

    #[test]
    fn useful_states_exclude_sink() {
        // DFA for {ab}: the sink is the only useless state
        let alphabet = Alphabet::from_tokens(["a", "b"]).unwrap();
        let a = alphabet.symbol("a").unwrap();
        let b = alphabet.symbol("b").unwrap();
        let mut p = PartialDfa::new(alphabet, 3, 0);
        p.transitions = vec![(0, a, 1), (1, b, 2)];
        p.finals = vec![2];
        let d = p.complete().unwrap();
        assert_eq!(d.state_count(), 4);
        let useful = d.useful_states();
        assert_eq!(useful.iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(!useful.contains(3));
    }

    #[test]
    fn useless_trap_component_excluded() {
        // states 3,4,5 form a trap that cannot reach the final state
        let alphabet = Alphabet::from_tokens(["a"]).unwrap();
        let d = Dfa::from_fn(alphabet, 6, 0, &[2], |q, _| match q {
            0 => 1,
            1 => 2,
            2 => 3,
            3 => 4,
            4 => 5,
            _ => 3,
        });
        let useful = d.useful_states();
        assert_eq!(useful.iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn image_identity_transformation_is_full() {
        let alphabet = Alphabet::from_tokens(["a"]).unwrap();
        let d = Dfa::from_fn(alphabet, 3, 0, &[0], |q, _| q);
        let a = d.alphabet().symbol("a").unwrap();
        assert_eq!(d.image(a), StateSet::full(3));
        assert!(d.image_of_token("z").is_err());
    }

    #[test]
    fn accepts_empty_word_iff_start_final() {
        let d = two_state();
        assert!(!d.accepts(&[]));
        assert!(d.accepts_tokens("a").unwrap());
        assert!(d.accepts_tokens("a z").is_err());
    }

    #[test]
    fn enumerate_sigma_star_over_a() {
        let alphabet = Alphabet::from_tokens(["a"]).unwrap();
        let d = Dfa::from_fn(alphabet, 1, 0, &[0], |_, _| 0);
        let words = d.enumerate_accepted(2);
        let tokens: Vec<String> = words
            .iter()
            .map(|w| d.alphabet().format_word(w))
            .collect();
        assert_eq!(tokens, vec!["ε", "a", "aa"]);
    }

    #[test]
    fn enumerate_empty_language() {
        let alphabet = Alphabet::from_tokens(["a"]).unwrap();
        let d = Dfa::from_fn(alphabet, 1, 0, &[], |_, _| 0);
        assert!(d.enumerate_accepted(4).is_empty());
    }

    #[test]
    fn minimize_merges_and_canonicalizes() {
        // two redundant copies of the same accepting chain
        let alphabet = Alphabet::from_tokens(["a"]).unwrap();
        let d = Dfa::from_fn(alphabet, 5, 0, &[2, 4], |q, _| match q {
            0 => 1,
            1 => 2,
            2 => 3,
            3 => 4,
            _ => 3,
        });
        let m = d.minimize();
        assert!(m.equivalent(&d).unwrap());
        assert!(m.state_count() <= d.state_count());
        let mm = m.minimize();
        assert_eq!(m, mm, "minimize must be idempotent");
    }

    #[test]
    fn equivalent_is_reflexive_and_detects_difference() {
        let d = two_state();
        assert!(d.equivalent(&d).unwrap());
        let alphabet = Alphabet::from_tokens(["a", "b"]).unwrap();
        let other = Dfa::from_fn(alphabet, 1, 0, &[0], |_, _| 0);
        assert!(!d.equivalent(&other).unwrap());
        let c = Alphabet::from_tokens(["x"]).unwrap();
        let bad = Dfa::from_fn(c, 1, 0, &[0], |_, _| 0);
        assert!(d.equivalent(&bad).is_err());
    }

    #[test]
    fn finite_language_detection() {
        let alphabet = Alphabet::from_tokens(["a", "b"]).unwrap();
        let a = alphabet.symbol("a").unwrap();
        let b = alphabet.symbol("b").unwrap();
        let mut p = PartialDfa::new(alphabet.clone(), 3, 0);
        p.transitions = vec![(0, a, 1), (1, b, 2)];
        p.finals = vec![2];
        assert!(p.complete().unwrap().has_finite_language());
        let d = two_state();
        assert!(!d.has_finite_language());
    }
}
