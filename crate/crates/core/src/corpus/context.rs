//! Context extraction: window, dependency and joint parent-sister contexts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::token::Sentence;
use super::vocab::Vocabulary;

/// Appended to the deprel of a daughter context.
pub const INVERSE_MARK: &str = "⁻¹";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextKind {
    Window,
    Dep,
    Joint,
}

/// Which contexts a target token produces. Parsed from and printed as
/// `win2`, `win5d`, `dep`, `joint`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContextSpec {
    pub kind: ContextKind,
    pub window_size: usize,
    pub directional: bool,
}

impl ContextSpec {
    pub fn window(size: usize, directional: bool) -> Self {
        ContextSpec { kind: ContextKind::Window, window_size: size, directional }
    }

    pub fn dep() -> Self {
        ContextSpec { kind: ContextKind::Dep, window_size: 0, directional: false }
    }

    pub fn joint() -> Self {
        ContextSpec { kind: ContextKind::Joint, window_size: 0, directional: false }
    }

    /// One of win2, win2d, win5, win5d, dep, joint.
    pub fn is_canonical(&self) -> bool {
        match self.kind {
            ContextKind::Window => matches!(self.window_size, 2 | 5),
            _ => true,
        }
    }
}

impl fmt::Display for ContextSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ContextKind::Window => {
                write!(f, "win{}{}", self.window_size, if self.directional { "d" } else { "" })
            }
            ContextKind::Dep => f.write_str("dep"),
            ContextKind::Joint => f.write_str("joint"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown context type `{0}` (expected winK, winKd, dep or joint)")]
pub struct ParseContextError(String);

impl FromStr for ContextSpec {
    type Err = ParseContextError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dep" => return Ok(ContextSpec::dep()),
            "joint" => return Ok(ContextSpec::joint()),
            _ => {}
        }
        let err = || ParseContextError(s.to_owned());
        let rest = s.strip_prefix("win").ok_or_else(err)?;
        let (digits, directional) = match rest.strip_suffix('d') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        let size: usize = digits.parse().map_err(|_| err())?;
        if size == 0 {
            return Err(err());
        }
        Ok(ContextSpec::window(size, directional))
    }
}

impl Serialize for ContextSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ContextSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoocEvent {
    pub target: u32,
    pub context: String,
}

/// Vocabulary ids of the tokens of `s`, `None` when out of vocabulary.
fn token_ids(s: &Sentence, v: &Vocabulary) -> Vec<Option<u32>> {
    s.tokens
        .iter()
        .map(|t| t.key().and_then(|k| v.id(&k)))
        .collect()
}

/// Call `emit(target, context)` for every co-occurrence in `s`.
pub fn for_each_context<F>(s: &Sentence, spec: &ContextSpec, v: &Vocabulary, emit: F)
where
    F: FnMut(u32, &str),
{
    match spec.kind {
        ContextKind::Window => window_contexts(s, spec.window_size, spec.directional, v, emit),
        ContextKind::Dep => dep_contexts(s, v, emit),
        ContextKind::Joint => joint_contexts(s, v, emit),
    }
}

pub fn extract_contexts(s: &Sentence, spec: &ContextSpec, v: &Vocabulary) -> Vec<CoocEvent> {
    let mut out = Vec::new();
    for_each_context(s, spec, v, |target, ctx| {
        out.push(CoocEvent { target, context: ctx.to_owned() })
    });
    out
}

pub fn extract_window_contexts(s: &Sentence, spec: &ContextSpec, v: &Vocabulary) -> Vec<CoocEvent> {
    debug_assert_eq!(spec.kind, ContextKind::Window);
    extract_contexts(s, spec, v)
}

pub fn extract_dep_contexts(s: &Sentence, v: &Vocabulary) -> Vec<CoocEvent> {
    extract_contexts(s, &ContextSpec::dep(), v)
}

pub fn extract_joint_contexts(s: &Sentence, v: &Vocabulary) -> Vec<CoocEvent> {
    extract_contexts(s, &ContextSpec::joint(), v)
}

// Out-of-vocabulary tokens are removed before the window is applied.
fn window_contexts<F>(s: &Sentence, k: usize, directional: bool, v: &Vocabulary, mut emit: F)
where
    F: FnMut(u32, &str),
{
    let kept: Vec<u32> = token_ids(s, v).into_iter().flatten().collect();
    let mut buf = String::new();
    for (i, &target) in kept.iter().enumerate() {
        let lo = i.saturating_sub(k);
        let hi = (i + k).min(kept.len().saturating_sub(1));
        for (j, &ctx) in kept.iter().enumerate().take(hi + 1).skip(lo) {
            if j == i {
                continue;
            }
            buf.clear();
            buf.push_str(v.key(ctx));
            if directional {
                buf.push_str(if j < i { "/l" } else { "/r" });
            }
            emit(target, &buf);
        }
    }
}

fn dep_contexts<F>(s: &Sentence, v: &Vocabulary, mut emit: F)
where
    F: FnMut(u32, &str),
{
    let ids = token_ids(s, v);
    let mut buf = String::new();
    for (i, tok) in s.tokens.iter().enumerate() {
        let Some(target) = ids[i] else { continue };
        if tok.head != 0 {
            if let Some(parent) = ids[tok.head - 1] {
                buf.clear();
                buf.push_str(v.key(parent));
                buf.push(':');
                buf.push_str(&tok.deprel);
                emit(target, &buf);
            }
        }
        for d in s.children(i) {
            if let Some(daughter) = ids[d] {
                buf.clear();
                buf.push_str(v.key(daughter));
                buf.push(':');
                buf.push_str(&s.tokens[d].deprel);
                buf.push_str(INVERSE_MARK);
                emit(target, &buf);
            }
        }
    }
}

fn joint_contexts<F>(s: &Sentence, v: &Vocabulary, mut emit: F)
where
    F: FnMut(u32, &str),
{
    let ids = token_ids(s, v);
    let mut buf = String::new();
    for (i, tok) in s.tokens.iter().enumerate() {
        let Some(target) = ids[i] else { continue };
        if tok.head == 0 {
            continue;
        }
        let p = tok.head - 1;
        let Some(parent) = ids[p] else { continue };
        for sister in s.children(p).filter(|&d| d != i) {
            if let Some(sister) = ids[sister] {
                buf.clear();
                buf.push_str(v.key(parent));
                buf.push('#');
                buf.push_str(v.key(sister));
                emit(target, &buf);
            }
        }
    }
}

/// Position right after the first `-p` POS suffix followed by `sep`.
fn split_after_pos(ctx: &str, sep: char) -> Option<usize> {
    let bytes = ctx.as_bytes();
    (1..bytes.len().saturating_sub(2)).find(|&i| {
        bytes[i] == b'-' && matches!(bytes[i + 1], b'n' | b'v' | b'a') && bytes[i + 2] == sep as u8
    })
    .map(|i| i + 2)
}

/// The bare lemma-POS words a context string refers to.
pub fn context_words<'a>(spec: &ContextSpec, ctx: &'a str) -> Vec<&'a str> {
    match spec.kind {
        ContextKind::Window => {
            let w = ctx
                .strip_suffix("/l")
                .or_else(|| ctx.strip_suffix("/r"))
                .filter(|_| spec.directional)
                .unwrap_or(ctx);
            vec![w]
        }
        ContextKind::Dep => match split_after_pos(ctx, ':') {
            Some(end) => vec![&ctx[..end]],
            None => vec![ctx],
        },
        ContextKind::Joint => match split_after_pos(ctx, '#') {
            Some(end) => vec![&ctx[..end], &ctx[end + 1..]],
            None => vec![ctx],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::conll::parse_conll;
    use crate::corpus::token::{Pos, Token};
    use crate::corpus::vocab::build_vocabulary;

    const CUTE_CATS: &str = "1\tcute\tcute\tADJ\t_\t_\t2\tamod\n\
2\tcats\tcat\tNOUN\t_\t_\t3\tnsubj\n\
3\tdrink\tdrink\tVERB\t_\t_\t0\troot\n\
4\tmilk\tmilk\tNOUN\t_\t_\t3\tdobj\n";

    fn cute_cats() -> (Sentence, Vocabulary) {
        let s = parse_conll(CUTE_CATS.as_bytes()).next().unwrap().unwrap();
        let v = build_vocabulary([&s], 1, &Pos::CONTENT);
        (s, v)
    }

    fn contexts_of(events: &[CoocEvent], v: &Vocabulary, key: &str) -> Vec<String> {
        let id = v.id(key).unwrap();
        events.iter().filter(|e| e.target == id).map(|e| e.context.clone()).collect()
    }

    #[test]
    fn window_cute_cats() {
        let (s, v) = cute_cats();
        let ev = extract_window_contexts(&s, &ContextSpec::window(2, false), &v);
        assert_eq!(contexts_of(&ev, &v, "drink-v"), vec!["cute-a", "cat-n", "milk-n"]);
        let ev = extract_window_contexts(&s, &ContextSpec::window(2, true), &v);
        assert_eq!(contexts_of(&ev, &v, "drink-v"), vec!["cute-a/l", "cat-n/l", "milk-n/r"]);
    }

    #[test]
    fn window_lonely_target() {
        let (s, _) = cute_cats();
        let v = Vocabulary::from_entries([("drink-v".to_string(), 1)]);
        assert!(extract_window_contexts(&s, &ContextSpec::window(5, false), &v).is_empty());
    }

    #[test]
    fn dep_cute_cats() {
        let (s, v) = cute_cats();
        let ev = extract_dep_contexts(&s, &v);
        assert_eq!(contexts_of(&ev, &v, "cat-n"), vec!["drink-v:nsubj", "cute-a:amod⁻¹"]);
        assert_eq!(contexts_of(&ev, &v, "milk-n"), vec!["drink-v:dobj"]);
    }

    #[test]
    fn joint_cute_cats() {
        let (s, v) = cute_cats();
        let ev = extract_joint_contexts(&s, &v);
        assert_eq!(contexts_of(&ev, &v, "cat-n"), vec!["drink-v#milk-n"]);
        assert_eq!(contexts_of(&ev, &v, "milk-n"), vec!["drink-v#cat-n"]);
        // cute's parent (cats) has no other daughters
        assert!(contexts_of(&ev, &v, "cute-a").is_empty());
    }

    #[test]
    fn single_token_sentence() {
        let s = Sentence::new(vec![Token {
            surface: "run".into(),
            lemma: "run".into(),
            pos: Pos::Verb,
            head: 0,
            deprel: "root".into(),
        }]);
        let v = build_vocabulary([&s], 1, &Pos::CONTENT);
        assert!(extract_dep_contexts(&s, &v).is_empty());
        assert!(extract_joint_contexts(&s, &v).is_empty());
    }

    #[test]
    fn spec_parsing() {
        for name in ["win2", "win2d", "win5", "win5d", "dep", "joint"] {
            let spec: ContextSpec = name.parse().unwrap();
            assert_eq!(spec.to_string(), name);
            assert!(spec.is_canonical());
        }
        let odd: ContextSpec = "win3".parse().unwrap();
        assert!(!odd.is_canonical());
        assert!("win".parse::<ContextSpec>().is_err());
        assert!("win0".parse::<ContextSpec>().is_err());
        assert!("tree".parse::<ContextSpec>().is_err());
    }

    #[test]
    fn words_of_contexts() {
        let w = ContextSpec::window(2, true);
        assert_eq!(context_words(&w, "cat-n/l"), vec!["cat-n"]);
        assert_eq!(context_words(&ContextSpec::dep(), "drink-v:nsubj"), vec!["drink-v"]);
        assert_eq!(context_words(&ContextSpec::dep(), "cute-a:amod⁻¹"), vec!["cute-a"]);
        assert_eq!(context_words(&ContextSpec::dep(), "x-ray-n:nmod:poss"), vec!["x-ray-n"]);
        assert_eq!(
            context_words(&ContextSpec::joint(), "drink-v#milk-n"),
            vec!["drink-v", "milk-n"]
        );
    }
}
