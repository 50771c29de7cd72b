use std::collections::{HashMap, VecDeque};

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::state_set::StateSet;
use crate::symbol::{Alphabet, Symbol};

/// A nondeterministic finite automaton without ε-transitions.
///
/// ε-transitions exist only inside the construction module's intermediate
/// [`EpsNfa`](crate::constructions::EpsNfa) form and are removed before an
/// `Nfa` is produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    /// Row-major table of target sets: `delta[q * k + a]`.
    delta: Vec<StateSet>,
    starts: StateSet,
    finals: StateSet,
}

impl Nfa {
    pub fn new(alphabet: Alphabet, states: usize, starts: StateSet, finals: StateSet) -> Nfa {
        assert_eq!(starts.width(), states);
        assert_eq!(finals.width(), states);
        let k = alphabet.len();
        Nfa {
            delta: vec![StateSet::empty(states); states * k],
            alphabet,
            starts,
            finals,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.starts.width()
    }

    pub fn starts(&self) -> &StateSet {
        &self.starts
    }

    pub fn finals(&self) -> &StateSet {
        &self.finals
    }

    pub fn targets(&self, q: usize, a: Symbol) -> &StateSet {
        &self.delta[q * self.alphabet.len() + a.index()]
    }

    pub fn add_transition(&mut self, q: usize, a: Symbol, r: usize) {
        let k = self.alphabet.len();
        self.delta[q * k + a.index()].insert(r);
    }

    pub fn add_transitions(&mut self, q: usize, a: Symbol, targets: &StateSet) {
        let k = self.alphabet.len();
        self.delta[q * k + a.index()].union_with(targets);
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        let mut current = self.starts.clone();
        for &a in word {
            let mut next = StateSet::empty(self.state_count());
            for q in current.iter() {
                next.union_with(self.targets(q, a));
            }
            current = next;
        }
        current.intersects(&self.finals)
    }

    pub fn accepts_tokens(&self, word: &str) -> Result<bool> {
        Ok(self.accepts(&self.alphabet.parse_word(word)?))
    }

    /// Encodes a DFA as an NFA with singleton transition sets.
    pub fn from_dfa(dfa: &Dfa) -> Nfa {
        let n = dfa.state_count();
        let mut nfa = Nfa::new(
            dfa.alphabet().clone(),
            n,
            StateSet::singleton(n, dfa.start()),
            dfa.finals().clone(),
        );
        for q in 0..n {
            for a in dfa.alphabet().symbols() {
                nfa.add_transition(q, a, dfa.step(q, a));
            }
        }
        nfa
    }

    /// Subset construction. Only subsets reachable from the start subset are
    /// materialized; the empty subset, when reached, becomes an explicit
    /// sink, so the result is a complete DFA.
    pub fn subset_construct(&self) -> Dfa {
        self.subset_construct_bounded(usize::MAX).expect("unbounded")
    }

    /// Subset construction with a cap on materialized subsets.
    pub fn subset_construct_bounded(&self, max_states: usize) -> Result<Dfa> {
        let k = self.alphabet.len();
        let n = self.state_count();
        let mut index: HashMap<StateSet, usize> = HashMap::new();
        let mut order: Vec<StateSet> = Vec::new();
        let mut delta: Vec<usize> = Vec::new();
        let mut work: VecDeque<usize> = VecDeque::new();

        index.insert(self.starts.clone(), 0);
        order.push(self.starts.clone());
        work.push_back(0);

        while let Some(i) = work.pop_front() {
            let subset = order[i].clone();
            for a in 0..k as u32 {
                let mut target = StateSet::empty(n);
                for q in subset.iter() {
                    target.union_with(self.targets(q, Symbol(a)));
                }
                let next_id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = order.len();
                        if id >= max_states {
                            return Err(Error::ResourceExceeded {
                                what: "subset construction states",
                                used: id + 1,
                                limit: max_states,
                                knob: "SPLICE_MAX_STATES",
                            });
                        }
                        index.insert(target.clone(), id);
                        order.push(target);
                        work.push_back(id);
                        id
                    }
                };
                delta.push(next_id);
            }
        }

        let m = order.len();
        let finals: Vec<usize> = (0..m).filter(|&i| order[i].intersects(&self.finals)).collect();
        Ok(Dfa::from_fn(
            self.alphabet.clone(),
            m,
            0,
            &finals,
            |q, a| delta[q * k + a.index()],
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_input_gives_isomorphic_dfa() {
        let alphabet = Alphabet::from_tokens(["a", "b"]).unwrap();
        let d = Dfa::from_fn(alphabet, 3, 0, &[2], |q, a| {
            if a.index() == 0 {
                (q + 1) % 3
            } else {
                q
            }
        });
        let back = Nfa::from_dfa(&d).subset_construct();
        assert_eq!(back.state_count(), 3);
        assert!(back.equivalent(&d).unwrap());
    }

    #[test]
    fn crossing_starts_reach_three_subsets() {
        // two states, both initial, a-transitions crossing: 0 -a-> 1, 1 -a-> 0
        let alphabet = Alphabet::from_tokens(["a"]).unwrap();
        let a = alphabet.symbol("a").unwrap();
        let mut nfa = Nfa::new(
            alphabet,
            2,
            StateSet::from_iter(2, [0, 1]),
            StateSet::singleton(2, 0),
        );
        nfa.add_transition(0, a, 1);
        nfa.add_transition(1, a, 0);
        // reachable subsets: {0,1} only (it is closed under a)
        let d = nfa.subset_construct();
        assert_eq!(d.state_count(), 1);

        // with an extra asymmetric edge the subsets shrink step by step
        let alphabet = Alphabet::from_tokens(["a"]).unwrap();
        let a = alphabet.symbol("a").unwrap();
        let mut nfa = Nfa::new(
            alphabet,
            2,
            StateSet::from_iter(2, [0, 1]),
            StateSet::singleton(2, 0),
        );
        nfa.add_transition(0, a, 1);
        // {0,1} -a-> {1} -a-> {} : three reachable subsets
        let d = nfa.subset_construct();
        assert_eq!(d.state_count(), 3);
    }

    #[test]
    fn empty_subset_is_sink() {
        let alphabet = Alphabet::from_tokens(["a"]).unwrap();
        let nfa = Nfa::new(
            alphabet,
            1,
            StateSet::singleton(1, 0),
            StateSet::singleton(1, 0),
        );
        // no transitions at all: {0} -a-> {} -a-> {}
        let d = nfa.subset_construct();
        assert_eq!(d.state_count(), 2);
        assert!(d.accepts(&[]));
        assert!(!d.accepts(&[Symbol(0)]));
    }

    #[test]
    fn budget_is_enforced() {
        let alphabet = Alphabet::from_tokens(["a", "b"]).unwrap();
        let d = Dfa::from_fn(alphabet, 6, 0, &[5], |q, a| (q + 1 + a.index()) % 6);
        let err = Nfa::from_dfa(&d).subset_construct_bounded(2);
        assert!(err.is_err());
    }
}
