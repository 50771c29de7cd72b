//! Parametric generators for the lower-bound witness families.
//!
//! Each generator reproduces one published transition table exactly; the
//! only filled-in choice is that a `min` over an empty index set maps to
//! the sink state, which is the unique language-neutral completion. All
//! generators are deterministic functions of their parameters.

use crate::dfa::{Dfa, PartialDfa};
use crate::error::{Error, Result};
use crate::splicing::{Marker, SplicingSystem, Variant};
use crate::symbol::Alphabet;

/// Identifies one witness family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    W24Finite,
    W23Regular,
    W23SemiFinite,
    W23SimpleFinite,
    W14Regular,
    W14SemiFinite,
}

impl FamilyId {
    pub const ALL: [FamilyId; 6] = [
        FamilyId::W24Finite,
        FamilyId::W23Regular,
        FamilyId::W23SemiFinite,
        FamilyId::W23SimpleFinite,
        FamilyId::W14Regular,
        FamilyId::W14SemiFinite,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FamilyId::W24Finite => "24-finite",
            FamilyId::W23Regular => "23-regular",
            FamilyId::W23SemiFinite => "23-semi-finite",
            FamilyId::W23SimpleFinite => "23-simple-finite",
            FamilyId::W14Regular => "14-regular",
            FamilyId::W14SemiFinite => "14-semi-finite",
        }
    }

    pub fn parse(text: &str) -> Result<FamilyId> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.code() == text)
            .ok_or_else(|| {
                Error::InvalidSystem(format!(
                    "unknown family `{text}` (expected one of: {})",
                    FamilyId::ALL.map(|f| f.code()).join(", ")
                ))
            })
    }

    /// Smallest parameter the family is defined for.
    pub fn min_n(self) -> usize {
        match self {
            FamilyId::W24Finite => 5,
            FamilyId::W23Regular => 3,
            FamilyId::W23SemiFinite => 5,
            FamilyId::W23SimpleFinite => 7,
            FamilyId::W14Regular => 3,
            FamilyId::W14SemiFinite => 5,
        }
    }

    /// Whether the family takes the `extra` enlargement parameter.
    pub fn takes_extra(self) -> bool {
        matches!(self, FamilyId::W14Regular | FamilyId::W14SemiFinite)
    }

    pub fn generate(self, n: usize, extra: usize) -> Result<SplicingSystem> {
        if n < self.min_n() {
            return Err(Error::WitnessTooSmall {
                family: self.code(),
                min: self.min_n(),
                n,
            });
        }
        match self {
            FamilyId::W24Finite => witness_24_finite(n),
            FamilyId::W23Regular => witness_23_regular(n),
            FamilyId::W23SemiFinite => witness_23_semi_finite(n),
            FamilyId::W23SimpleFinite => witness_23_simple_finite(n),
            FamilyId::W14Regular => witness_14_regular(n, extra),
            FamilyId::W14SemiFinite => witness_14_semi_finite(n, extra),
        }
    }
}

/// All subsets of `lo..=hi`, ordered by size then lexicographically.
fn subsets(lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let items: Vec<usize> = (lo..=hi).collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for &x in &items {
        let mut extended: Vec<Vec<usize>> = out
            .iter()
            .map(|s| {
                let mut t = s.clone();
                t.push(x);
                t
            })
            .collect();
        out.append(&mut extended);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Token `a_{i,j,…}` for the jump symbol indexed by a sorted set.
fn gamma_token(set: &[usize]) -> String {
    format!(
        "a_{{{}}}",
        set.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

/// `min { j ∈ set : i < j ≤ hi }`, with the empty case mapped to `sink`.
fn min_jump(set: &[usize], i: usize, hi: usize, sink: usize) -> usize {
    set.iter()
        .copied()
        .filter(|&j| j > i && j <= hi)
        .min()
        .unwrap_or(sink)
}

/// Fills every transition with the sink; later pushes override.
fn prefill_sink(p: &mut PartialDfa, sink: usize) {
    for i in 0..p.states {
        for a in p.alphabet.symbols() {
            p.transitions.push((i, a, sink));
        }
    }
}

/// (2,4) with finite initial language: states `0..n`, final `n-2`, sink
/// `n-1`, alphabet `{b} ∪ {a_S : S ⊆ {2,…,n−2}}`, markers `{b} × Γ`.
pub fn witness_24_finite(n: usize) -> Result<SplicingSystem> {
    let gammas = subsets(2, n - 2);
    let mut tokens = vec!["b".to_owned()];
    tokens.extend(gammas.iter().map(|s| gamma_token(s)));
    let alphabet = Alphabet::from_tokens(tokens)?;
    let b = alphabet.symbol("b")?;
    let sink = n - 1;

    let mut p = PartialDfa::new(alphabet.clone(), n, 0);
    p.finals = vec![n - 2];
    prefill_sink(&mut p, sink);
    for i in 0..=n - 3 {
        p.transitions.push((i, b, i + 1));
    }
    let mut markers = Vec::new();
    for set in &gammas {
        let sym = alphabet.symbol(&gamma_token(set))?;
        p.transitions.push((0, sym, 1));
        for i in 1..=n - 3 {
            p.transitions.push((i, sym, min_jump(set, i, n - 2, sink)));
        }
        markers.push(Marker::new(b, sym));
    }
    let dfa = p.complete()?;
    debug_assert_eq!(dfa.state_count(), n);
    SplicingSystem::new(Variant::V24, dfa, markers)
}

/// (2,3) with regular initial language: the three-letter cyclic automaton
/// with final `n-1` and marker `(c, c)`. The self-loop on `b` at state 0
/// follows the published figure.
pub fn witness_23_regular(n: usize) -> Result<SplicingSystem> {
    let alphabet = Alphabet::from_tokens(["a", "b", "c"])?;
    let a = alphabet.symbol("a")?;
    let b = alphabet.symbol("b")?;
    let c = alphabet.symbol("c")?;
    let dfa = Dfa::from_fn(alphabet, n, 0, &[n - 1], |i, s| {
        if s == a {
            (i + 1) % n
        } else if s == b {
            if i == 1 {
                0
            } else {
                i // includes the b-self-loop at state 0
            }
        } else {
            0 // c sends every state to 0
        }
    });
    SplicingSystem::new(Variant::V23, dfa, vec![Marker::new(c, c)])
}

/// (2,3) with finite initial language: chain automaton over `{a, b, c}`,
/// final `n-2`, explicit sink `n-1`, marker `(a, c)`.
pub fn witness_23_semi_finite(n: usize) -> Result<SplicingSystem> {
    let alphabet = Alphabet::from_tokens(["a", "b", "c"])?;
    let a = alphabet.symbol("a")?;
    let b = alphabet.symbol("b")?;
    let c = alphabet.symbol("c")?;
    let mut p = PartialDfa::new(alphabet, n, 0);
    p.finals = vec![n - 2];
    prefill_sink(&mut p, n - 1);
    for i in 1..=n - 2 {
        p.transitions.push((i, a, i + 1)); // i = n-2 lands on the sink
    }
    for i in 2..=n - 2 {
        p.transitions.push((i, b, i + 1));
    }
    p.transitions.push((0, c, 1));
    let dfa = p.complete()?;
    debug_assert_eq!(dfa.state_count(), n);
    SplicingSystem::new(Variant::V23, dfa, vec![Marker::new(a, c)])
}

/// (2,3)-simple with finite initial language: the seven-letter chain with
/// per-letter gaps, final `n-2`, sink `n-1`, marker `(c, c)`.
pub fn witness_23_simple_finite(n: usize) -> Result<SplicingSystem> {
    let alphabet = Alphabet::from_tokens(["a", "b", "c", "d", "e", "f", "g"])?;
    let sym = |t: &str| alphabet.symbol(t).unwrap();
    let mut p = PartialDfa::new(alphabet.clone(), n, 0);
    p.finals = vec![n - 2];
    prefill_sink(&mut p, n - 1);
    let last = n - 2;
    for i in 0..=last.saturating_sub(1) {
        // advancing letters per state, everything else falls to the sink
        let advance: &[&str] = match i {
            0 | 1 => &["a", "b", "c"],
            2 => &["a", "b", "c", "d", "e"],
            3 => &["a", "d", "f"],
            _ => &["a", "b", "d", "e", "f", "g"],
        };
        for t in advance {
            p.transitions.push((i, sym(t), i + 1));
        }
    }
    let dfa = p.complete()?;
    debug_assert_eq!(dfa.state_count(), n);
    let c = sym("c");
    SplicingSystem::new(Variant::V23, dfa, vec![Marker::new(c, c)])
}

/// (1,4) with regular initial language: the cyclic automaton with final 0
/// and loop symbols; `extra_loops` additional symbols behave like `c` and
/// contribute markers `(x, x)`, growing `M₁`.
pub fn witness_14_regular(n: usize, extra_loops: usize) -> Result<SplicingSystem> {
    let mut tokens = vec!["a".to_owned(), "b".to_owned(), "c".to_owned()];
    for k in 0..extra_loops {
        tokens.push(format!("c{}", k + 2));
    }
    let alphabet = Alphabet::from_tokens(tokens)?;
    let a = alphabet.symbol("a")?;
    let b = alphabet.symbol("b")?;
    let dfa = Dfa::from_fn(alphabet.clone(), n, 0, &[0], |i, s| {
        if s == a {
            (i + 1) % n
        } else if s == b {
            if i == n - 1 {
                0
            } else {
                i
            }
        } else {
            i // c and every extra loop symbol are the identity
        }
    });
    let mut markers = Vec::new();
    for tok in alphabet.tokens() {
        if tok != "a" && tok != "b" {
            let s = alphabet.symbol(tok)?;
            markers.push(Marker::new(s, s));
        }
    }
    SplicingSystem::new(Variant::V14, dfa, markers)
}

/// (1,4) with finite initial language: chain letters `b, c, d` plus jump
/// symbols `a_S` for `S ⊆ {1,…,n−2}`; markers `{b} × Γ ∪ {(b,d),(d,b)}`.
/// `extra_pairs` adds chain-symbol pairs `s_k, t_k` with markers
/// `(s_k, t_k)` and `(t_k, s_k)`.
pub fn witness_14_semi_finite(n: usize, extra_pairs: usize) -> Result<SplicingSystem> {
    let gammas = subsets(1, n - 2);
    let mut tokens = vec!["b".to_owned(), "c".to_owned(), "d".to_owned()];
    for k in 0..extra_pairs {
        tokens.push(format!("s{}", k + 1));
        tokens.push(format!("t{}", k + 1));
    }
    let chain_count = tokens.len();
    tokens.extend(gammas.iter().map(|s| gamma_token(s)));
    let alphabet = Alphabet::from_tokens(tokens)?;
    let sink = n - 1;

    let mut p = PartialDfa::new(alphabet.clone(), n, 0);
    p.finals = vec![n - 2];
    prefill_sink(&mut p, sink);
    let chain_tokens: Vec<String> = alphabet.tokens()[..chain_count].to_vec();
    for tok in &chain_tokens {
        let s = alphabet.symbol(tok)?;
        for i in 0..=n - 2 {
            p.transitions.push((i, s, i + 1)); // i = n-2 lands on the sink
        }
    }
    for set in &gammas {
        let s = alphabet.symbol(&gamma_token(set))?;
        for i in 0..=n - 2 {
            p.transitions.push((i, s, min_jump(set, i, n - 2, sink)));
        }
    }
    let dfa = p.complete()?;
    debug_assert_eq!(dfa.state_count(), n);

    let b = alphabet.symbol("b")?;
    let d = alphabet.symbol("d")?;
    let mut markers = vec![Marker::new(b, d), Marker::new(d, b)];
    for set in &gammas {
        markers.push(Marker::new(b, alphabet.symbol(&gamma_token(set))?));
    }
    for k in 0..extra_pairs {
        let s = alphabet.symbol(&format!("s{}", k + 1))?;
        let t = alphabet.symbol(&format!("t{}", k + 1))?;
        markers.push(Marker::new(s, t));
        markers.push(Marker::new(t, s));
    }
    SplicingSystem::new(Variant::V14, dfa, markers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct, closure_23};
    use crate::limits::ResourceLimits;
    use crate::state_set::StateSet;

    #[test]
    fn family_parameter_checks() {
        assert!(FamilyId::W24Finite.generate(4, 0).is_err());
        assert!(FamilyId::W23SimpleFinite.generate(6, 0).is_err());
        assert!(FamilyId::W23Regular.generate(3, 0).is_ok());
    }

    #[test]
    fn w24_alphabet_size_is_exponential() {
        for n in 5..=7 {
            let sys = witness_24_finite(n).unwrap();
            assert_eq!(sys.alphabet().len(), (1 << (n - 3)) + 1);
            assert!(sys.finite_initial());
            assert!(!sys.is_simple());
            assert_eq!(sys.initial().minimize().state_count(), n);
        }
    }

    #[test]
    fn w23_regular_shape() {
        let sys = witness_23_regular(5).unwrap();
        assert!(sys.is_simple());
        assert!(!sys.finite_initial());
        // every state is useful (the a-cycle passes through the final state)
        assert_eq!(sys.initial().useful_states().len(), 5);
        assert!(sys.initial().accepts_tokens("a a a a").unwrap());
        assert_eq!(sys.initial().minimize().state_count(), 5);
    }

    #[test]
    fn w23_semi_finite_shape() {
        let n = 6;
        let sys = witness_23_semi_finite(n).unwrap();
        assert!(!sys.is_simple());
        assert!(sys.finite_initial());
        // im δ_c = {1, sink}
        let im = sys.initial().image_of_token("c").unwrap();
        assert_eq!(im.iter().collect::<Vec<_>>(), vec![1, n - 1]);
        // longest accepted word: c a^{n-3}
        let longest = format!("c {}", "a ".repeat(n - 3).trim_end());
        assert!(sys.initial().accepts_tokens(&longest).unwrap());
        assert!(sys.initial().accepts_tokens(&format!("b {}", "a ".repeat(n - 3).trim_end())).unwrap() == false);
        let words = sys.initial().enumerate_accepted(n);
        assert!(words.iter().all(|w| w.len() <= n - 2));
        assert_eq!(sys.initial().minimize().state_count(), n);
    }

    #[test]
    fn w23_simple_finite_start_closure() {
        let n = 8;
        let sys = witness_23_simple_finite(n).unwrap();
        assert!(sys.is_simple());
        assert!(sys.finite_initial());
        assert_eq!(sys.alphabet().len(), 7);
        // the closure of {0} pulls in im δ_c = {1, 2, 3, sink}
        let seed = StateSet::singleton(n, 0);
        let closed = closure_23(&sys, &seed).unwrap();
        let useful = sys.initial().useful_states();
        let live: Vec<usize> = closed.iter().filter(|q| useful.contains(*q)).collect();
        assert_eq!(live, vec![0, 1, 2, 3]);
        assert!(closed.contains(n - 1));
        assert_eq!(sys.initial().minimize().state_count(), n);
    }

    #[test]
    fn w14_regular_shape() {
        let sys = witness_14_regular(4, 0).unwrap();
        assert!(sys.is_simple());
        assert!(!sys.finite_initial());
        assert_eq!(sys.m1().len(), 1);
        let sys2 = witness_14_regular(4, 1).unwrap();
        assert_eq!(sys2.m1().len(), 2);
        assert_eq!(sys2.initial().minimize().state_count(), 4);
        // im δ_c covers all states (identity transformation)
        assert_eq!(sys.initial().image_of_token("c").unwrap().len(), 4);
    }

    #[test]
    fn w14_semi_finite_shape() {
        let n = 5;
        let sys = witness_14_semi_finite(n, 0).unwrap();
        assert!(sys.finite_initial());
        assert!(!sys.is_simple());
        assert_eq!(sys.m1().len(), 2); // {b, d}
        assert_eq!(sys.alphabet().len(), 3 + (1 << (n - 2)));
        assert_eq!(sys.initial().minimize().state_count(), n);
        let sys2 = witness_14_semi_finite(n, 1).unwrap();
        assert_eq!(sys2.m1().len(), 4);
    }

    #[test]
    fn generators_are_deterministic() {
        for family in FamilyId::ALL {
            let n = family.min_n() + 1;
            let a = family.generate(n, 0).unwrap();
            let b = family.generate(n, 0).unwrap();
            assert_eq!(
                crate::format::dfa_to_text(a.initial()),
                crate::format::dfa_to_text(b.initial())
            );
            assert_eq!(a.markers(), b.markers());
        }
    }

    #[test]
    fn finite_families_are_acyclic_regular_families_cycle() {
        for family in FamilyId::ALL {
            let sys = family.generate(family.min_n(), 0).unwrap();
            let finite = sys.finite_initial();
            match family {
                FamilyId::W23Regular | FamilyId::W14Regular => assert!(!finite),
                _ => assert!(finite),
            }
        }
    }

    #[test]
    fn witness_24_small_construct_size() {
        let sys = witness_24_finite(5).unwrap();
        let dfa = construct(&sys, &ResourceLimits::default()).unwrap();
        assert_eq!(dfa.state_count(), 9); // 2^{n-2} + 1 at n = 5
    }
}
