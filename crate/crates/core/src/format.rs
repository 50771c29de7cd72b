//! Text and JSON serializations.
//!
//! The line-oriented DFA format is meant for hand-authoring:
//!
//! ```text
//! # comment
//! alphabet: a b c
//! states: 4
//! start: 0
//! finals: 2
//! trans: 0 a 1
//! trans: 1 b 2
//! ```
//!
//! Missing edges go to an implicit sink on load. Emission is canonical
//! (transitions sorted by state then alphabet order), and parsing an
//! emitted DFA reproduces it exactly; re-emitting reproduces the bytes.
//!
//! The JSON formats mirror the same schema; a system bundle packs a
//! variant, a marker list and an initial DFA (inline or file reference).

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dfa::{Dfa, PartialDfa};
use crate::error::{Error, Result};
use crate::splicing::{Marker, SplicingSystem, Variant};
use crate::symbol::Alphabet;

/// Parses the line-oriented DFA format and completes the table.
pub fn parse_dfa_text(text: &str) -> Result<Dfa> {
    let mut alphabet: Option<Alphabet> = None;
    let mut states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut finals: Vec<usize> = Vec::new();
    let mut transitions: Vec<(usize, String, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse {
            line: lineno + 1,
            msg,
        };
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| err("expected `key: value`".into()))?;
        let rest = rest.trim();
        match key.trim() {
            "alphabet" => {
                alphabet = Some(Alphabet::from_tokens(rest.split_whitespace())?);
            }
            "states" => {
                states = Some(rest.parse().map_err(|_| err(format!("bad state count `{rest}`")))?);
            }
            "start" => {
                start = Some(rest.parse().map_err(|_| err(format!("bad start state `{rest}`")))?);
            }
            "finals" => {
                for tok in rest.split_whitespace() {
                    finals.push(tok.parse().map_err(|_| err(format!("bad final state `{tok}`")))?);
                }
            }
            "trans" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(err("expected `trans: state symbol state`".into()));
                }
                let q = parts[0].parse().map_err(|_| err(format!("bad state `{}`", parts[0])))?;
                let r = parts[2].parse().map_err(|_| err(format!("bad state `{}`", parts[2])))?;
                transitions.push((q, parts[1].to_owned(), r));
            }
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }

    let alphabet = alphabet.ok_or(Error::Parse {
        line: 0,
        msg: "missing `alphabet:` line".into(),
    })?;
    let states = states.ok_or(Error::Parse {
        line: 0,
        msg: "missing `states:` line".into(),
    })?;
    let start = start.ok_or(Error::Parse {
        line: 0,
        msg: "missing `start:` line".into(),
    })?;
    let mut partial = PartialDfa::new(alphabet, states, start);
    partial.finals = finals;
    for (q, tok, r) in transitions {
        let sym = partial.alphabet.symbol(&tok)?;
        partial.transitions.push((q, sym, r));
    }
    partial.complete()
}

/// Canonical text form; [`parse_dfa_text`] of the output reproduces the DFA.
pub fn dfa_to_text(dfa: &Dfa) -> String {
    let mut out = String::new();
    writeln!(out, "alphabet: {}", dfa.alphabet()).unwrap();
    writeln!(out, "states: {}", dfa.state_count()).unwrap();
    writeln!(out, "start: {}", dfa.start()).unwrap();
    let finals: Vec<String> = dfa.finals().iter().map(|q| q.to_string()).collect();
    writeln!(out, "finals: {}", finals.join(" ")).unwrap();
    for q in 0..dfa.state_count() {
        for a in dfa.alphabet().symbols() {
            writeln!(out, "trans: {q} {} {}", dfa.alphabet().token(a), dfa.step(q, a)).unwrap();
        }
    }
    out
}

/// JSON mirror of the text schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DfaJson {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub start: usize,
    pub finals: Vec<usize>,
    pub trans: Vec<(usize, String, usize)>,
}

impl DfaJson {
    pub fn from_dfa(dfa: &Dfa) -> DfaJson {
        DfaJson {
            alphabet: dfa.alphabet().tokens().to_vec(),
            states: dfa.state_count(),
            start: dfa.start(),
            finals: dfa.finals().iter().collect(),
            trans: (0..dfa.state_count())
                .flat_map(|q| {
                    dfa.alphabet()
                        .symbols()
                        .map(move |a| (q, dfa.alphabet().token(a).to_owned(), dfa.step(q, a)))
                })
                .collect(),
        }
    }

    pub fn into_dfa(self) -> Result<Dfa> {
        let alphabet = Alphabet::from_tokens(self.alphabet)?;
        let mut partial = PartialDfa::new(alphabet, self.states, self.start);
        partial.finals = self.finals;
        for (q, tok, r) in self.trans {
            let sym = partial.alphabet.symbol(&tok)?;
            partial.transitions.push((q, sym, r));
        }
        partial.complete()
    }
}

/// Where a bundle's initial DFA lives.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialRef {
    Inline(DfaJson),
    File { file: String },
}

/// Bundled system file: variant, markers and initial DFA, plus generation
/// metadata when produced by a witness generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemBundle {
    pub variant: String,
    /// Marker pairs as `[first, second]` token pairs.
    pub markers: Vec<(String, String)>,
    pub initial: InitialRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BundleMetadata>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleMetadata {
    pub family: String,
    pub n: usize,
    #[serde(default)]
    pub extra: usize,
}

impl SystemBundle {
    pub fn from_system(system: &SplicingSystem, metadata: Option<BundleMetadata>) -> SystemBundle {
        let alphabet = system.alphabet();
        SystemBundle {
            variant: system.variant().code().to_owned(),
            markers: system
                .markers()
                .iter()
                .map(|m| {
                    (
                        alphabet.token(m.first).to_owned(),
                        alphabet.token(m.second).to_owned(),
                    )
                })
                .collect(),
            initial: InitialRef::Inline(DfaJson::from_dfa(system.initial())),
            metadata,
        }
    }

    /// Resolves the bundle into a system. `base_dir` anchors file
    /// references. The resulting system passes [`SplicingSystem::validate`]
    /// with no error diagnostics (marker tokens are checked here).
    pub fn into_system(self, base_dir: &Path) -> Result<SplicingSystem> {
        let variant = Variant::parse(&self.variant)?;
        let dfa = match self.initial {
            InitialRef::Inline(json) => json.into_dfa()?,
            InitialRef::File { file } => load_dfa(&base_dir.join(file))?,
        };
        let mut markers = Vec::with_capacity(self.markers.len());
        for (first, second) in &self.markers {
            markers.push(Marker::new(
                dfa.alphabet().symbol(first)?,
                dfa.alphabet().symbol(second)?,
            ));
        }
        SplicingSystem::new(variant, dfa, markers)
    }
}

/// Loads a DFA, choosing the format by extension (`.json` vs text).
pub fn load_dfa(path: &Path) -> Result<Dfa> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let json: DfaJson = serde_json::from_str(&text)?;
        json.into_dfa()
    } else {
        parse_dfa_text(&text)
    }
}

/// Serializes a DFA, choosing the format by extension (`.json` vs text).
pub fn dfa_to_string(dfa: &Dfa, path: &Path) -> String {
    if path.extension().is_some_and(|e| e == "json") {
        let mut s = serde_json::to_string_pretty(&DfaJson::from_dfa(dfa)).unwrap();
        s.push('\n');
        s
    } else {
        dfa_to_text(dfa)
    }
}

pub fn load_bundle(path: &Path) -> Result<SplicingSystem> {
    let text = std::fs::read_to_string(path)?;
    let bundle: SystemBundle = serde_json::from_str(&text)?;
    bundle.into_system(path.parent().unwrap_or(Path::new(".")))
}

/// Parses the CLI marker syntax: comma-separated `first:second` pairs where
/// tokens may contain braces with inner commas, e.g.
/// `b:a_{2,3},b:d,d:b`.
pub fn parse_marker_list(alphabet: &Alphabet, text: &str) -> Result<Vec<Marker>> {
    let mut markers = Vec::new();
    for pair in split_top_level(text) {
        let pair = pair.trim();
        if pair.is_empty() {
            continue;
        }
        let (first, second) = split_pair(pair).ok_or_else(|| {
            Error::InvalidSystem(format!("bad marker `{pair}`; expected `first:second`"))
        })?;
        markers.push(Marker::new(
            alphabet.symbol(first.trim())?,
            alphabet.symbol(second.trim())?,
        ));
    }
    Ok(markers)
}

/// Splits on commas that are not nested inside braces.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Splits one `first:second` pair on the top-level colon.
fn split_pair(pair: &str) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, c) in pair.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth = depth.saturating_sub(1),
            ':' if depth == 0 => return Some((&pair[..i], &pair[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Atomic write: the content lands under a temporary name in the target
/// directory and is renamed into place.
pub fn write_atomically(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    if !dir.as_os_str().is_empty() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!(
        "{}.tmp-{}",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# finite language {ab}
alphabet: a b
states: 3
start: 0
finals: 2
trans: 0 a 1
trans: 1 b 2
";

    #[test]
    fn parse_completes_missing_edges() {
        let dfa = parse_dfa_text(SAMPLE).unwrap();
        assert_eq!(dfa.state_count(), 4); // sink added
        assert!(dfa.accepts_tokens("a b").unwrap());
        assert!(!dfa.accepts_tokens("b").unwrap());
    }

    #[test]
    fn text_roundtrip_is_bit_exact() {
        let dfa = parse_dfa_text(SAMPLE).unwrap();
        let text = dfa_to_text(&dfa);
        let again = parse_dfa_text(&text).unwrap();
        assert_eq!(dfa, again);
        assert_eq!(text, dfa_to_text(&again));
    }

    #[test]
    fn json_roundtrip() {
        let dfa = parse_dfa_text(SAMPLE).unwrap();
        let json = serde_json::to_string(&DfaJson::from_dfa(&dfa)).unwrap();
        let back: DfaJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_dfa().unwrap(), dfa);
    }

    #[test]
    fn marker_syntax_handles_braced_commas() {
        let alphabet =
            Alphabet::from_tokens(["b", "d", "a_{2,3}"]).unwrap();
        let markers = parse_marker_list(&alphabet, "b:a_{2,3},b:d,d:b").unwrap();
        assert_eq!(markers.len(), 3);
        assert_eq!(alphabet.token(markers[0].second), "a_{2,3}");
        assert!(parse_marker_list(&alphabet, "b").is_err());
        assert!(parse_marker_list(&alphabet, "b:zzz").is_err());
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(parse_dfa_text("alphabet: a\nstates: 1\nstart: 0\nbogus: 1\n").is_err());
    }
}
