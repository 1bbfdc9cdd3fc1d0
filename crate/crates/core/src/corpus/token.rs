use std::fmt;

/// Coarse part of speech. Only nouns, verbs and adjectives enter the
/// vocabulary; everything else maps to [`Pos::Other`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Other,
}

impl Pos {
    /// One-letter code used in lemma-POS keys, `None` for [`Pos::Other`].
    pub fn code(self) -> Option<char> {
        match self {
            Pos::Noun => Some('n'),
            Pos::Verb => Some('v'),
            Pos::Adjective => Some('a'),
            Pos::Other => None,
        }
    }

    pub fn from_code(code: &str) -> Option<Pos> {
        match code {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" | "j" => Some(Pos::Adjective),
            "other" | "o" | "x" => Some(Pos::Other),
            _ => None,
        }
    }

    pub const CONTENT: [Pos; 3] = [Pos::Noun, Pos::Verb, Pos::Adjective];
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.code() {
            Some(c) => write!(f, "{c}"),
            None => f.write_str("other"),
        }
    }
}

/// Build the `lemma-p` key under which a word is interned.
pub fn lemma_pos_key(lemma: &str, pos: Pos) -> Option<String> {
    pos.code().map(|c| format!("{lemma}-{c}"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
    /// 1-based index of the parent token, 0 for the root.
    pub head: usize,
    pub deprel: String,
}

impl Token {
    pub fn key(&self) -> Option<String> {
        lemma_pos_key(&self.lemma, self.pos)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentenceDefect {
    HeadOutOfRange { token: usize, head: usize },
    SelfHead { token: usize },
    Cycle { token: usize },
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Self {
        Sentence { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Check that head links are in range, never self-referential, and form a
    /// forest.
    pub fn validate(&self) -> Result<(), SentenceDefect> {
        let n = self.tokens.len();
        for (i, tok) in self.tokens.iter().enumerate() {
            let idx = i + 1;
            if tok.head > n {
                return Err(SentenceDefect::HeadOutOfRange { token: idx, head: tok.head });
            }
            if tok.head == idx {
                return Err(SentenceDefect::SelfHead { token: idx });
            }
        }
        // 0 = unvisited, 1 = on current path, 2 = reaches a root
        let mut state = vec![0u8; n + 1];
        for start in 1..=n {
            let mut path = Vec::new();
            let mut cur = start;
            while cur != 0 && state[cur] == 0 {
                state[cur] = 1;
                path.push(cur);
                cur = self.tokens[cur - 1].head;
            }
            if cur != 0 && state[cur] == 1 {
                return Err(SentenceDefect::Cycle { token: cur });
            }
            for p in path {
                state[p] = 2;
            }
        }
        Ok(())
    }

    /// 0-based indices of the daughters of the token at 0-based `parent`.
    pub fn children(&self, parent: usize) -> impl Iterator<Item = usize> + '_ {
        self.tokens
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.head == parent + 1)
            .map(|(i, _)| i)
    }
}
