use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::limits::ResourceLimits;
use crate::symbol::{Alphabet, Symbol};
use crate::words::{CodePool, WordCodec};

/// The four semi-simple rule shapes. The tag names the rule positions that
/// carry singleton letters; the remaining positions are empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Rules `(a, ε; b, ε)`: splicing `x₁ a x₂` with `y₁ b y₂` yields `x₁ a y₂`.
    V13,
    /// Rules `(a, ε; ε, b)`: yields `x₁ a b y₂`.
    V14,
    /// Rules `(ε, a; b, ε)`: yields `x₁ y₂`.
    V23,
    /// Rules `(ε, a; ε, b)`: yields `x₁ b y₂`.
    V24,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::V13, Variant::V14, Variant::V23, Variant::V24];

    pub fn code(self) -> &'static str {
        match self {
            Variant::V13 => "13",
            Variant::V14 => "14",
            Variant::V23 => "23",
            Variant::V24 => "24",
        }
    }

    pub fn parse(text: &str) -> Result<Variant> {
        match text.trim_start_matches(['v', 'V']) {
            "13" => Ok(Variant::V13),
            "14" => Ok(Variant::V14),
            "23" => Ok(Variant::V23),
            "24" => Ok(Variant::V24),
            other => Err(Error::InvalidSystem(format!(
                "unknown variant `{other}` (expected 13, 14, 23 or 24)"
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", &self.code()[..1], &self.code()[1..])
    }
}

/// A marker `(a, b)`, the letter pair parameterizing one splicing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marker {
    pub first: Symbol,
    pub second: Symbol,
}

impl Marker {
    pub fn new(first: Symbol, second: Symbol) -> Marker {
        Marker { first, second }
    }
}

/// A semi-simple splicing system: a variant tag, a marker set and a regular
/// initial language given by a complete DFA.
#[derive(Debug, Clone)]
pub struct SplicingSystem {
    variant: Variant,
    initial: Dfa,
    /// Sorted and deduplicated.
    markers: Vec<Marker>,
}

impl SplicingSystem {
    pub fn new(variant: Variant, initial: Dfa, mut markers: Vec<Marker>) -> Result<SplicingSystem> {
        let k = initial.alphabet().len() as u32;
        for m in &markers {
            if m.first.0 >= k || m.second.0 >= k {
                return Err(Error::InvalidSystem(
                    "marker symbol outside the system alphabet".into(),
                ));
            }
        }
        markers.sort();
        markers.dedup();
        Ok(SplicingSystem {
            variant,
            initial,
            markers,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.initial.alphabet()
    }

    pub fn initial(&self) -> &Dfa {
        &self.initial
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    /// `M₁`: the distinct first components of the marker set.
    pub fn m1(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.markers.iter().map(|m| m.first).collect();
        v.sort();
        v.dedup();
        v
    }

    /// `M₂`: the distinct second components of the marker set.
    pub fn m2(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.markers.iter().map(|m| m.second).collect();
        v.sort();
        v.dedup();
        v
    }

    /// A system is simple when every marker has the form `(a, a)`.
    pub fn is_simple(&self) -> bool {
        self.markers.iter().all(|m| m.first == m.second)
    }

    /// Whether the initial language is finite (initial DFA acyclic apart
    /// from its sink).
    pub fn finite_initial(&self) -> bool {
        self.initial.has_finite_language()
    }

    /// Structural diagnostics: inert markers, language classification and
    /// the simple flag. A well-formed system yields no error entries.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let useful = self.initial.useful_states();
        for m in &self.markers {
            for (side, sym) in [("first", m.first), ("second", m.second)] {
                let im = self.initial.image(sym);
                let dead = !im.iter().any(|q| useful.contains(q));
                if dead {
                    out.push(Diagnostic {
                        severity: Severity::Warning,
                        message: format!(
                            "marker ({}, {}) is inert: its {side} symbol `{}` has no occurrence \
                             in the initial language (im δ is all useless)",
                            self.alphabet().token(m.first),
                            self.alphabet().token(m.second),
                            self.alphabet().token(sym),
                        ),
                    });
                }
            }
        }
        out.push(Diagnostic {
            severity: Severity::Info,
            message: format!(
                "initial language is {}; system is {}",
                if self.finite_initial() { "finite" } else { "regular (infinite)" },
                if self.is_simple() { "simple" } else { "semi-simple" },
            ),
        });
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

/// A set of words together with the length cap it was computed under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSet {
    cap: usize,
    words: BTreeSet<Vec<Symbol>>,
}

impl WordSet {
    pub fn new(cap: usize) -> WordSet {
        WordSet {
            cap,
            words: BTreeSet::new(),
        }
    }

    pub fn from_words<I: IntoIterator<Item = Vec<Symbol>>>(cap: usize, words: I) -> WordSet {
        let mut set = WordSet::new(cap);
        for w in words {
            set.insert(w);
        }
        set
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Inserts `word` if it respects the cap; returns whether it was added.
    pub fn insert(&mut self, word: Vec<Symbol>) -> bool {
        if word.len() > self.cap {
            return false;
        }
        self.words.insert(word)
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Symbol>> {
        self.words.iter()
    }

    pub fn is_subset_of(&self, other: &WordSet) -> bool {
        self.words.is_subset(&other.words)
    }

    /// Words re-filtered to `cap` (used to compare sets computed under
    /// different intermediate caps).
    pub fn filtered(&self, cap: usize) -> WordSet {
        WordSet {
            cap,
            words: self
                .words
                .iter()
                .filter(|w| w.len() <= cap)
                .cloned()
                .collect(),
        }
    }
}

/// One splicing application: every `z` obtainable from the ordered pair
/// `(x, y)` under the rule determined by `variant` and `marker`, over all
/// factorizations. No factorization yields the empty set.
pub fn splice(
    variant: Variant,
    marker: Marker,
    x: &[Symbol],
    y: &[Symbol],
) -> BTreeSet<Vec<Symbol>> {
    let mut out = BTreeSet::new();
    let x_cuts: Vec<usize> = (0..x.len()).filter(|&i| x[i] == marker.first).collect();
    if x_cuts.is_empty() {
        return out;
    }
    let y_cuts: Vec<usize> = (0..y.len()).filter(|&j| y[j] == marker.second).collect();
    for &i in &x_cuts {
        for &j in &y_cuts {
            let mut z: Vec<Symbol> = Vec::with_capacity(i + 2 + y.len() - j);
            z.extend_from_slice(&x[..i]);
            match variant {
                Variant::V13 => z.push(marker.first),
                Variant::V24 => z.push(marker.second),
                Variant::V23 => {}
                Variant::V14 => {
                    z.push(marker.first);
                    z.push(marker.second);
                }
            }
            z.extend_from_slice(&y[j + 1..]);
            out.insert(z);
        }
    }
    out
}

/// One application of σ restricted to words of length at most `cap`:
/// `L ∪ { z : (x, y) ⊢ z, x, y ∈ L, |z| ≤ cap }`.
pub fn sigma_step(system: &SplicingSystem, words: &WordSet, cap: usize) -> WordSet {
    let mut out = WordSet::new(cap);
    for w in words.iter() {
        out.insert(w.clone());
    }
    for marker in system.markers() {
        // prefixes of words cut before an occurrence of the first symbol,
        // and suffixes cut after an occurrence of the second symbol
        let mut prefixes: BTreeSet<&[Symbol]> = BTreeSet::new();
        let mut suffixes: BTreeSet<&[Symbol]> = BTreeSet::new();
        for w in words.iter() {
            for (i, &s) in w.iter().enumerate() {
                if s == marker.first {
                    prefixes.insert(&w[..i]);
                }
                if s == marker.second {
                    suffixes.insert(&w[i + 1..]);
                }
            }
        }
        let mid: Vec<Symbol> = match system.variant() {
            Variant::V13 => vec![marker.first],
            Variant::V24 => vec![marker.second],
            Variant::V23 => vec![],
            Variant::V14 => vec![marker.first, marker.second],
        };
        for p in &prefixes {
            for s in &suffixes {
                if p.len() + mid.len() + s.len() <= cap {
                    let mut z = Vec::with_capacity(p.len() + mid.len() + s.len());
                    z.extend_from_slice(p);
                    z.extend_from_slice(&mid);
                    z.extend_from_slice(s);
                    out.insert(z);
                }
            }
        }
    }
    out
}

/// The bounded closure oracle: the fixpoint of [`sigma_step`] over words of
/// length at most `intermediate_len`, seeded with the accepted words of the
/// initial DFA, then filtered to `out_len`.
///
/// The result is monotone in `intermediate_len` and always a subset of the
/// generated language; completeness is assessed empirically via stability
/// under growing intermediates and agreement with the exact constructions.
pub fn closure_bounded(
    system: &SplicingSystem,
    out_len: usize,
    intermediate_len: usize,
    limits: &ResourceLimits,
) -> Result<WordSet> {
    assert!(
        intermediate_len >= out_len,
        "intermediate_len must be at least out_len"
    );
    let codec = WordCodec::new(system.alphabet().len(), intermediate_len)?;
    let closure = closure_codes(system, intermediate_len, &codec, limits)?;
    let mut out = WordSet::new(out_len);
    closure.for_each_upto(&codec, out_len, |code| {
        out.insert(codec.decode(code));
    });
    Ok(out)
}

/// Packed-code closure shared by [`closure_bounded`] and the lab's
/// cross-validation (which compares code sets without materializing words).
pub(crate) fn closure_codes(
    system: &SplicingSystem,
    cap: usize,
    codec: &WordCodec,
    limits: &ResourceLimits,
) -> Result<CodePool> {
    let mid_of = |m: &Marker| -> u128 {
        match system.variant() {
            Variant::V13 => codec.encode(&[m.first]),
            Variant::V24 => codec.encode(&[m.second]),
            Variant::V23 => codec.encode(&[]),
            Variant::V14 => codec.encode(&[m.first, m.second]),
        }
    };

    let (mut words, seed) = enumerate_codes_with_list(system.initial(), cap, codec, limits)?;
    let mut frontier = seed;
    frontier.sort_unstable();
    if system.markers().is_empty() {
        return Ok(words);
    }

    let k = system.alphabet().len();
    // per-letter prefix/suffix pools, grouped by length
    let mut pref_pool: Vec<Vec<Vec<u128>>> = vec![vec![Vec::new(); cap + 1]; k];
    let mut suf_pool: Vec<Vec<Vec<u128>>> = vec![vec![Vec::new(); cap + 1]; k];
    let mut pref_seen: Vec<CodePool> = (0..k).map(|_| CodePool::new(codec, cap)).collect();
    let mut suf_seen: Vec<CodePool> = (0..k).map(|_| CodePool::new(codec, cap)).collect();
    // count of closure words per length, for full-slice skipping
    let mut len_count: Vec<u128> = vec![0; cap + 1];
    for &w in &frontier {
        len_count[codec.len(w)] += 1;
    }
    let universe = codec.universe_size(cap);

    loop {
        if words.len() as u128 == universe {
            return Ok(words); // every bounded word is present already
        }
        // new prefixes/suffixes contributed by the frontier
        let mut pref_new: Vec<Vec<Vec<u128>>> = vec![vec![Vec::new(); cap + 1]; k];
        let mut suf_new: Vec<Vec<Vec<u128>>> = vec![vec![Vec::new(); cap + 1]; k];
        for &w in &frontier {
            let len = codec.len(w);
            for i in 0..len {
                let s = codec.symbol_at(w, i).index();
                let p = codec.prefix(w, i);
                if pref_seen[s].insert(codec, p) {
                    pref_new[s][codec.len(p)].push(p);
                }
                let q = codec.suffix_after(w, i);
                if suf_seen[s].insert(codec, q) {
                    suf_new[s][codec.len(q)].push(q);
                }
            }
        }

        let mut produced: Vec<u128> = Vec::new();
        for marker in system.markers() {
            let mid = mid_of(marker);
            let mid_len = codec.len(mid);
            let a = marker.first.index();
            let b = marker.second.index();
            // (new prefixes × all suffixes) and (old prefixes × new suffixes)
            for (pi, ps) in [(&pref_new[a], true), (&pref_pool[a], false)] {
                for (i, pgroup) in pi.iter().enumerate() {
                    if pgroup.is_empty() || i + mid_len > cap {
                        continue;
                    }
                    for j in 0..=(cap - i - mid_len) {
                        let out_len = i + mid_len + j;
                        if len_count[out_len] >= codec.slice_size(out_len) {
                            continue; // length slice already saturated
                        }
                        let sgroups: [&Vec<u128>; 2] = if ps {
                            [&suf_pool[b][j], &suf_new[b][j]]
                        } else {
                            [&suf_new[b][j], &EMPTY_GROUP]
                        };
                        for sgroup in sgroups {
                            for &p in pgroup {
                                if len_count[out_len] >= codec.slice_size(out_len) {
                                    break;
                                }
                                for &s in sgroup {
                                    let z = codec.concat3(p, mid, s);
                                    if words.insert(codec, z) {
                                        len_count[out_len] += 1;
                                        produced.push(z);
                                        if words.len() > limits.max_words {
                                            return Err(Error::ResourceExceeded {
                                                what: "closure word set",
                                                used: words.len(),
                                                limit: limits.max_words,
                                                knob: "SPLICE_MAX_WORDS",
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }

        // merge the new prefix/suffix groups into the pools
        for s in 0..k {
            for len in 0..=cap {
                pref_pool[s][len].append(&mut pref_new[s][len]);
                suf_pool[s][len].append(&mut suf_new[s][len]);
            }
        }

        if produced.is_empty() {
            return Ok(words);
        }
        produced.sort_unstable();
        frontier = produced;
    }
}

static EMPTY_GROUP: Vec<u128> = Vec::new();

/// Packed enumeration of the accepted words of `dfa` up to `cap`.
pub(crate) fn enumerate_codes(
    dfa: &Dfa,
    cap: usize,
    codec: &WordCodec,
    limits: &ResourceLimits,
) -> Result<CodePool> {
    Ok(enumerate_codes_with_list(dfa, cap, codec, limits)?.0)
}

fn enumerate_codes_with_list(
    dfa: &Dfa,
    cap: usize,
    codec: &WordCodec,
    limits: &ResourceLimits,
) -> Result<(CodePool, Vec<u128>)> {
    let useful = dfa.useful_states();
    let mut pool = CodePool::new(codec, cap);
    let mut list = Vec::new();
    // iterative DFS over (state, digits, len)
    let mut stack: Vec<(usize, u128, usize)> = vec![(dfa.start(), 0, 0)];
    while let Some((q, digits, len)) = stack.pop() {
        if dfa.is_final(q) {
            let code = codec.pack(digits, len);
            if pool.insert(codec, code) {
                list.push(code);
            }
            if pool.len() > limits.max_words {
                return Err(Error::ResourceExceeded {
                    what: "enumerated word set",
                    used: pool.len(),
                    limit: limits.max_words,
                    knob: "SPLICE_MAX_WORDS",
                });
            }
        }
        if len == cap {
            continue;
        }
        for a in dfa.alphabet().symbols() {
            let t = dfa.step(q, a);
            if useful.contains(t) {
                stack.push((t, digits + a.0 as u128 * codec.pows_at(len), len + 1));
            }
        }
    }
    Ok((pool, list))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfa::PartialDfa;

    fn sys_v13_aba() -> SplicingSystem {
        let alphabet = Alphabet::from_tokens(["a", "b"]).unwrap();
        let a = alphabet.symbol("a").unwrap();
        let b = alphabet.symbol("b").unwrap();
        let mut p = PartialDfa::new(alphabet, 4, 0);
        p.transitions = vec![(0, a, 1), (1, b, 2), (2, a, 3)];
        p.finals = vec![3];
        let dfa = p.complete().unwrap();
        SplicingSystem::new(Variant::V13, dfa, vec![Marker::new(a, a)]).unwrap()
    }

    fn word(alphabet: &Alphabet, text: &str) -> Vec<Symbol> {
        text.chars()
            .map(|c| alphabet.symbol(&c.to_string()).unwrap())
            .collect()
    }

    #[test]
    fn splice_forced_single_letters() {
        let alphabet = Alphabet::from_tokens(["a", "b"]).unwrap();
        let a = alphabet.symbol("a").unwrap();
        let b = alphabet.symbol("b").unwrap();
        let m = Marker::new(a, b);
        let x = vec![a];
        let y = vec![b];
        let got24 = splice(Variant::V24, m, &x, &y);
        assert_eq!(got24.into_iter().collect::<Vec<_>>(), vec![vec![b]]);
        let got23 = splice(Variant::V23, m, &x, &y);
        assert_eq!(got23.into_iter().collect::<Vec<_>>(), vec![vec![]]);
        let got14 = splice(Variant::V14, m, &x, &y);
        assert_eq!(got14.into_iter().collect::<Vec<_>>(), vec![vec![a, b]]);
    }

    #[test]
    fn splice_v13_all_factorizations() {
        let sys = sys_v13_aba();
        let alphabet = sys.alphabet();
        let aba = word(alphabet, "aba");
        let a = alphabet.symbol("a").unwrap();
        let got = splice(Variant::V13, Marker::new(a, a), &aba, &aba);
        let expected: BTreeSet<Vec<Symbol>> = [
            word(alphabet, "a"),
            word(alphabet, "aba"),
            word(alphabet, "ababa"),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn splice_without_occurrence_is_empty() {
        let alphabet = Alphabet::from_tokens(["a", "b", "c", "d"]).unwrap();
        let s = |t: &str| alphabet.symbol(t).unwrap();
        let got = splice(
            Variant::V13,
            Marker::new(s("a"), s("b")),
            &word(&alphabet, "ccc"),
            &word(&alphabet, "bd"),
        );
        assert!(got.is_empty());
    }

    #[test]
    fn sigma_step_no_markers_is_identity() {
        let sys = sys_v13_aba();
        let base = WordSet::from_words(5, sys.initial().enumerate_accepted(5));
        let empty_sys = SplicingSystem::new(Variant::V13, sys.initial().clone(), vec![]).unwrap();
        assert_eq!(sigma_step(&empty_sys, &base, 5), base);
    }

    #[test]
    fn sigma_step_on_aba() {
        let sys = sys_v13_aba();
        let alphabet = sys.alphabet().clone();
        let base = WordSet::from_words(5, [word(&alphabet, "aba")]);
        let stepped = sigma_step(&sys, &base, 5);
        let expected = WordSet::from_words(
            5,
            [
                word(&alphabet, "a"),
                word(&alphabet, "aba"),
                word(&alphabet, "ababa"),
            ],
        );
        assert_eq!(stepped, expected);
        // cap 3 truncates ababa
        let capped = sigma_step(&sys, &base.filtered(3), 3);
        assert_eq!(
            capped,
            WordSet::from_words(3, [word(&alphabet, "a"), word(&alphabet, "aba")])
        );
    }

    #[test]
    fn closure_of_aba_is_a_ba_star() {
        let sys = sys_v13_aba();
        let alphabet = sys.alphabet().clone();
        let closure = closure_bounded(&sys, 9, 13, &ResourceLimits::default()).unwrap();
        let expected = WordSet::from_words(
            9,
            (0..5).map(|k| {
                let mut w = word(&alphabet, "a");
                for _ in 0..k {
                    w.extend(word(&alphabet, "ba"));
                }
                w
            }),
        );
        assert_eq!(closure, expected);
    }

    #[test]
    fn closure_no_markers_is_initial() {
        let sys = sys_v13_aba();
        let empty_sys = SplicingSystem::new(Variant::V13, sys.initial().clone(), vec![]).unwrap();
        let closure = closure_bounded(&empty_sys, 6, 10, &ResourceLimits::default()).unwrap();
        assert_eq!(
            closure,
            WordSet::from_words(6, sys.initial().enumerate_accepted(6))
        );
    }

    #[test]
    fn closure_monotone_in_intermediate() {
        let sys = sys_v13_aba();
        let lo = closure_bounded(&sys, 7, 7, &ResourceLimits::default()).unwrap();
        let hi = closure_bounded(&sys, 7, 11, &ResourceLimits::default()).unwrap();
        assert!(lo.is_subset_of(&hi));
    }

    #[test]
    fn closure_respects_word_budget() {
        let sys = sys_v13_aba();
        let limits = ResourceLimits {
            max_words: 3,
            ..ResourceLimits::default()
        };
        assert!(closure_bounded(&sys, 9, 13, &limits).is_err());
    }

    #[test]
    fn validate_flags_inert_marker_and_classifies() {
        let sys = sys_v13_aba();
        let alphabet = sys.alphabet().clone();
        let b = alphabet.symbol("b").unwrap();
        // (b, b): im δ_b = {2, sink}; state 2 is useful, so not inert
        let live = SplicingSystem::new(
            Variant::V13,
            sys.initial().clone(),
            vec![Marker::new(b, b)],
        )
        .unwrap();
        assert!(live
            .validate()
            .iter()
            .all(|d| d.severity != Severity::Warning));
        // finite classification
        assert!(sys.finite_initial());
        assert!(sys.is_simple());
    }

    #[test]
    fn marker_outside_alphabet_rejected() {
        let sys = sys_v13_aba();
        let bad = SplicingSystem::new(
            Variant::V13,
            sys.initial().clone(),
            vec![Marker::new(Symbol(7), Symbol(0))],
        );
        assert!(bad.is_err());
    }
}
