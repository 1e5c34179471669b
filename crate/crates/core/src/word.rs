//! Words in the rank-2 free group: representation, parsing, and arithmetic.
//!
//! A [`Word`] is stored run-length encoded as a sequence of [`Letter`]s,
//! each a generator with a nonzero exponent, with adjacent letters always
//! on distinct generators. The empty sequence is the identity.

use std::fmt;

use crate::error::{Error, Result};

/// One of the two free generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    X1,
    X2,
}

impl Gen {
    pub fn name(self) -> &'static str {
        match self {
            Gen::X1 => "x1",
            Gen::X2 => "x2",
        }
    }
}

/// A generator together with a nonzero exponent: one run of a reduced word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub exp: i64,
}

/// A freely reduced word in the free group on `x1`, `x2`.
///
/// Invariants: no letter has exponent zero, and adjacent letters carry
/// distinct generators. Values are immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

fn push_reduced(acc: &mut Vec<Letter>, gen: Gen, exp: i64) {
    if exp == 0 {
        return;
    }
    if let Some(last) = acc.last_mut() {
        if last.gen == gen {
            last.exp = last.exp.checked_add(exp).expect("exponent overflow");
            if last.exp == 0 {
                acc.pop();
            }
            return;
        }
    }
    acc.push(Letter { gen, exp });
}

impl Word {
    /// The identity word.
    pub fn identity() -> Word {
        Word::default()
    }

    /// The word consisting of a single generator.
    pub fn generator(gen: Gen) -> Word {
        Word {
            letters: vec![Letter { gen, exp: 1 }],
        }
    }

    /// Builds a word from arbitrary (generator, exponent) pairs, reducing freely.
    pub fn from_letters<I: IntoIterator<Item = (Gen, i64)>>(letters: I) -> Word {
        let mut acc = Vec::new();
        for (gen, exp) in letters {
            push_reduced(&mut acc, gen, exp);
        }
        Word { letters: acc }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The reduced letters, run-length encoded.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Reduced word length: the sum of exponent magnitudes.
    pub fn reduced_len(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    /// Freely reduced concatenation.
    pub fn multiply(&self, other: &Word) -> Word {
        let mut acc = self.letters.clone();
        for l in &other.letters {
            push_reduced(&mut acc, l.gen, l.exp);
        }
        Word { letters: acc }
    }

    /// The group inverse.
    pub fn invert(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    exp: -l.exp,
                })
                .collect(),
        }
    }

    /// Integer power, by square-and-multiply.
    pub fn power(&self, e: i64) -> Word {
        if e == 0 {
            return Word::identity();
        }
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut result = Word::identity();
        let mut square = base;
        let mut rem = e.unsigned_abs();
        while rem > 0 {
            if rem & 1 == 1 {
                result = result.multiply(&square);
            }
            rem >>= 1;
            if rem > 0 {
                square = square.multiply(&square);
            }
        }
        result
    }

    /// The commutator `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.invert()
            .multiply(&b.invert())
            .multiply(a)
            .multiply(b)
    }

    /// Replaces every `x1` by `v1` and every `x2` by `v2`, then reduces.
    pub fn substitute(&self, v1: &Word, v2: &Word) -> Word {
        let mut acc = Word::identity();
        for l in &self.letters {
            let base = match l.gen {
                Gen::X1 => v1,
                Gen::X2 => v2,
            };
            acc = acc.multiply(&base.power(l.exp));
        }
        acc
    }

    /// Removes cyclic conjugation: merges or cancels wrap-around runs until
    /// the first and last letters carry distinct generators. Preserves the
    /// trace polynomial.
    pub fn cyclically_reduce(&self) -> Word {
        let mut runs = self.letters.clone();
        while runs.len() > 1 && runs[0].gen == runs[runs.len() - 1].gen {
            let last = runs.pop().unwrap();
            let merged = runs[0]
                .exp
                .checked_add(last.exp)
                .expect("exponent overflow");
            if merged == 0 {
                runs.remove(0);
            } else {
                runs[0].exp = merged;
            }
        }
        Word { letters: runs }
    }

    /// Rotates run `i` to the front of a cyclically reduced word.
    pub(crate) fn rotate_runs(&self, i: usize) -> Word {
        let mut runs = Vec::with_capacity(self.letters.len());
        runs.extend_from_slice(&self.letters[i..]);
        runs.extend_from_slice(&self.letters[..i]);
        Word { letters: runs }
    }

    /// Expands to single letters, one code per generator occurrence:
    /// `x1 -> 0`, `x1^-1 -> 1`, `x2 -> 2`, `x2^-1 -> 3`.
    pub(crate) fn expand_codes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.reduced_len() as usize);
        for l in &self.letters {
            let code = match (l.gen, l.exp > 0) {
                (Gen::X1, true) => 0,
                (Gen::X1, false) => 1,
                (Gen::X2, true) => 2,
                (Gen::X2, false) => 3,
            };
            for _ in 0..l.exp.unsigned_abs() {
                out.push(code);
            }
        }
        out
    }

    /// Cache key identifying the word up to cyclic rotation and inversion.
    ///
    /// Equal keys are sound for trace memoization: traces are invariant
    /// under both operations.
    pub fn canonical_trace_key(&self) -> TraceKey {
        let mut seq = self.expand_codes();
        // cyclic reduction at the letter level
        while seq.len() >= 2 && seq[0] == seq[seq.len() - 1] ^ 1 {
            seq.pop();
            seq.remove(0);
        }
        let fwd = least_rotation(&seq);
        let mut inv: Vec<u8> = seq.iter().rev().map(|c| c ^ 1).collect();
        inv = least_rotation(&inv);
        TraceKey(if inv < fwd { inv } else { fwd }.into_boxed_slice())
    }
}

/// Canonical representative of a word's cyclic-rotation/inversion class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceKey(Box<[u8]>);

/// Lexicographically least rotation, via the two-pointer duel.
fn least_rotation(s: &[u8]) -> Vec<u8> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
        } else {
            if a > b {
                i += k + 1;
            } else {
                j += k + 1;
            }
            if i == j {
                j += 1;
            }
            k = 0;
        }
    }
    let start = i.min(j);
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&s[start..]);
    out.extend_from_slice(&s[..start]);
    out
}

/// The word `x1^2 [x1^-2, x2^-1]^k` whose trace polynomial factors over
/// the real cyclotomic ring of conductor `2k+1`.
pub fn theorem_word(k: u64) -> Result<Word> {
    if k < 1 {
        return Err(Error::InvalidInput(format!("k must be >= 1, got {k}")));
    }
    let x1 = Word::generator(Gen::X1);
    let c = base_commutator();
    let k = i64::try_from(k).map_err(|_| Error::InvalidInput("k too large".into()))?;
    Ok(x1.power(2).multiply(&c.power(k)))
}

/// The commutator `c = [x1^-2, x2^-1] = x1^2 x2 x1^-2 x2^-1`.
pub fn base_commutator() -> Word {
    let x1 = Word::generator(Gen::X1);
    let x2 = Word::generator(Gen::X2);
    Word::commutator(&x1.power(-2), &x2.power(-1))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", l.gen.name())?;
            if l.exp != 1 {
                write!(f, "^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

/// Parses word text.
///
/// Grammar: `expr := term+`, `term := atom ['^' signed-int]`,
/// `atom := 'x1' | 'x2' | '1' | '(' expr ')' | '[' expr ',' expr ']'`,
/// with juxtaposition as the product and `[a,b] = a^-1 b^-1 a b`.
/// Whitespace and `*` are optional separators. The atom `1` denotes the
/// identity, so every printed word parses back.
pub fn parse(text: &str) -> Result<Word> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let word = p.expr()?;
    p.skip_separators();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(word)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r' | b'*')) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Word> {
        let mut acc = self.term()?;
        loop {
            self.skip_separators();
            match self.peek() {
                Some(b'x' | b'1' | b'(' | b'[') => {
                    let t = self.term()?;
                    acc = acc.multiply(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Word> {
        self.skip_separators();
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.signed_int()?;
            if e == 0 {
                return Err(self.error("zero exponent is not allowed"));
            }
            return Ok(atom.power(e));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                match self.peek() {
                    Some(b'1') => {
                        self.pos += 1;
                        Ok(Word::generator(Gen::X1))
                    }
                    Some(b'2') => {
                        self.pos += 1;
                        Ok(Word::generator(Gen::X2))
                    }
                    _ => Err(self.error("expected 'x1' or 'x2'")),
                }
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_separators();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.skip_separators();
                if self.peek() != Some(b',') {
                    return Err(self.error("expected ',' in commutator"));
                }
                self.pos += 1;
                let b = self.expr()?;
                self.skip_separators();
                if self.peek() != Some(b']') {
                    return Err(self.error("expected ']'"));
                }
                self.pos += 1;
                Ok(Word::commutator(&a, &b))
            }
            _ => Err(self.error("expected 'x1', 'x2', '1', '(' or '['")),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        let mut value: i64 = 0;
        while let Some(d @ b'0'..=b'9') = self.peek() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((d - b'0') as i64))
                .ok_or_else(|| self.error("exponent out of range"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        Ok(if negative { -value } else { value })
    }
}
