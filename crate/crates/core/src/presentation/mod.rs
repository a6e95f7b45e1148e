//! Finite group presentations, free-group words and Fox calculus.

mod abelian;
mod character;
mod fox;

use std::fmt;

use crate::error::{Error, Result};

pub use abelian::{abelianize, Abelianization};
pub use character::{make_character, multiplicative_kernel, Character, KernelLattice};
pub use fox::{eval_word, fox_derivative, fox_row, FoxSum};

/// `x_gen^exp` with `exp = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            exp: -self.exp,
        }
    }
}

/// Freely reduced word in the free group on the generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// `x_gen^k` for any integer `k`.
    pub fn gen_pow(gen: usize, k: i64) -> Word {
        let exp = if k < 0 { -1 } else { 1 };
        Word(vec![Letter { gen, exp }; k.unsigned_abs() as usize])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            assert!(l.exp == 1 || l.exp == -1, "letters have exponent ±1");
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(), |acc, _| acc.mul(&base))
    }

    /// `a b a⁻¹ b⁻¹`
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Exponent sum of every generator.
    pub fn exponent_sums(&self, ngens: usize) -> Vec<i64> {
        let mut v = vec![0i64; ngens];
        for l in &self.0 {
            v[l.gen] += l.exp as i64;
        }
        v
    }

    /// Text form with runs collapsed into powers, e.g. `t a t^-1 a^-2`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let letters = self.word.letters();
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let k = (j - i) as i64 * l.exp as i64;
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = &self.names[l.gen];
            if k == 1 {
                write!(f, "{}", name)?;
            } else {
                write!(f, "{}^{}", name, k)?;
            }
            i = j;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    name: String,
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    /// Relators are freely reduced; an empty relator is rejected.
    pub fn new(name: &str, generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::InvalidInput(format!("generator `{}` declared twice", g)));
            }
        }
        let mut reduced = Vec::with_capacity(relators.len());
        for (i, r) in relators.into_iter().enumerate() {
            let r = Word::from_letters(r.0);
            if r.is_empty() {
                return Err(Error::EmptyRelator(i + 1));
            }
            if let Some(l) = r.letters().iter().find(|l| l.gen >= generators.len()) {
                return Err(Error::UndeclaredGenerator(format!("#{}", l.gen)));
            }
            reduced.push(r);
        }
        Ok(GroupPresentation {
            name: name.to_string(),
            generators,
            relators: reduced,
        })
    }

    pub fn free_group(names: &[&str]) -> GroupPresentation {
        GroupPresentation {
            name: format!("F{}", names.len()),
            generators: names.iter().map(|s| s.to_string()).collect(),
            relators: Vec::new(),
        }
    }

    /// Parses the presentation file format.
    pub fn parse(text: &str) -> Result<GroupPresentation> {
        let mut name = String::from("G");
        let mut gens: Option<Vec<String>> = None;
        let mut rels = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap();
            let trimmed = line.trim_start();
            if trimmed.is_empty() {
                continue;
            }
            let indent = line.len() - trimmed.len();
            let (kw, rest) = match trimmed.find(char::is_whitespace) {
                Some(i) => (&trimmed[..i], &trimmed[i..]),
                None => (trimmed, ""),
            };
            let rest_col = indent + kw.len();
            match kw {
                "group" => {
                    let n = rest.trim();
                    if n.is_empty() {
                        return Err(Error::parse(line_no, rest_col + 1, "expected a group name"));
                    }
                    name = n.to_string();
                }
                "gens" => {
                    let list = gens.get_or_insert_with(Vec::new);
                    let mut col = rest_col;
                    for tok in rest.split(' ') {
                        if !tok.trim().is_empty() {
                            let tok = tok.trim();
                            if !is_ident(tok) {
                                return Err(Error::parse(
                                    line_no,
                                    col + 1,
                                    format!("invalid generator name `{}`", tok),
                                ));
                            }
                            if list.iter().any(|g| g == tok) {
                                return Err(Error::parse(
                                    line_no,
                                    col + 1,
                                    format!("generator `{}` declared twice", tok),
                                ));
                            }
                            list.push(tok.to_string());
                        }
                        col += tok.len() + 1;
                    }
                }
                "rel" => {
                    let Some(g) = gens.as_ref() else {
                        return Err(Error::parse(line_no, indent + 1, "`rel` before `gens`"));
                    };
                    let w = parse_word_at(rest, g, line_no, rest_col)?;
                    if w.is_empty() {
                        return Err(Error::EmptyRelator(rels.len() + 1));
                    }
                    rels.push(w);
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        indent + 1,
                        format!("unknown keyword `{}`", other),
                    ))
                }
            }
        }
        let generators =
            gens.ok_or_else(|| Error::parse(1, 1, "missing `gens` line"))?;
        GroupPresentation::new(&name, generators, rels)
    }

    /// Parses a word in this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word_at(text, &self.generators, 1, 0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn generator(&self, name: &str) -> Result<Word> {
        let i = self
            .generator_index(name)
            .ok_or_else(|| Error::UndeclaredGenerator(name.to_string()))?;
        Ok(Word::gen_pow(i, 1))
    }

    /// Text in the presentation file format; parses back to `self`.
    pub fn to_text(&self) -> String {
        let mut s = format!("group {}\ngens {}\n", self.name, self.generators.join(" "));
        for r in &self.relators {
            s.push_str(&format!("rel {}\n", r.display(&self.generators)));
        }
        s
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Word grammar: tokens `x`, `x^k`, `[x,y]` separated by whitespace.
fn parse_word_at(text: &str, gens: &[String], line: usize, col0: usize) -> Result<Word> {
    let chars: Vec<char> = text.chars().collect();
    let mut letters = Vec::new();
    let mut i = 0;
    let lookup = |name: &str, col: usize| -> Result<usize> {
        if !is_ident(name) {
            return Err(Error::parse(line, col, format!("invalid generator `{}`", name)));
        }
        gens.iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::UndeclaredGenerator(name.to_string()))
    };
    let ident_end = |mut j: usize| {
        while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
            j += 1;
        }
        j
    };
    while i < chars.len() {
        let col = col0 + i + 1;
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '[' {
            let close = chars[i..]
                .iter()
                .position(|&c| c == ']')
                .map(|p| p + i)
                .ok_or_else(|| Error::parse(line, col, "unclosed `[`"))?;
            let inner: String = chars[i + 1..close].iter().collect();
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::parse(line, col, "commutator needs two generators"));
            }
            let a = Word::gen_pow(lookup(parts[0], col + 1)?, 1);
            let b = Word::gen_pow(lookup(parts[1], col + 1)?, 1);
            letters.extend_from_slice(Word::commutator(&a, &b).letters());
            i = close + 1;
        } else if c.is_alphabetic() || c == '_' {
            let end = ident_end(i);
            let name: String = chars[i..end].iter().collect();
            let gen = lookup(&name, col)?;
            i = end;
            let mut k: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                k = s
                    .parse()
                    .map_err(|_| Error::parse(line, col0 + start + 1, "expected an integer exponent"))?;
            }
            letters.extend_from_slice(Word::gen_pow(gen, k).letters());
        } else {
            return Err(Error::parse(line, col, format!("unexpected character `{}`", c)));
        }
        if i < chars.len() && !chars[i].is_whitespace() && chars[i] != '[' {
            return Err(Error::parse(line, col0 + i + 1, "expected whitespace between tokens"));
        }
    }
    Ok(Word::from_letters(letters))
}

/// The commutators `[g_i, g_j]`, `i < j`, of the generators.
pub fn commutator_generators(p: &GroupPresentation) -> Vec<Word> {
    let n = p.ngens();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(Word::commutator(&Word::gen_pow(i, 1), &Word::gen_pow(j, 1)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bs12_parses() {
        let p = GroupPresentation::parse("gens a t\nrel t a t^-1 a^-2").unwrap();
        assert_eq!(p.ngens(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].len(), 5);
        assert_eq!(
            p.relators()[0].display(p.generators()).to_string(),
            "t a t^-1 a^-2"
        );
    }

    #[test]
    fn trivial_relator_rejected() {
        assert_eq!(
            GroupPresentation::parse("gens a\nrel a a^-1"),
            Err(Error::EmptyRelator(1))
        );
    }

    #[test]
    fn commutator_sugar() {
        let p = GroupPresentation::parse("gens a b\nrel [a,b]").unwrap();
        assert_eq!(p.relators()[0].display(p.generators()).to_string(), "a b a^-1 b^-1");
    }

    #[test]
    fn errors_carry_position() {
        match GroupPresentation::parse("gens a\nrel a $") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 7)),
            other => panic!("{:?}", other),
        }
        assert_eq!(
            GroupPresentation::parse("gens a\nrel b"),
            Err(Error::UndeclaredGenerator("b".into()))
        );
    }

    #[test]
    fn text_round_trip() {
        let p = GroupPresentation::parse("group S2\ngens a b c d\nrel [a,b] [c,d]").unwrap();
        assert_eq!(GroupPresentation::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn commutator_counts() {
        let names = ["a", "b", "c"];
        assert_eq!(commutator_generators(&GroupPresentation::free_group(&names[..1])).len(), 0);
        assert_eq!(commutator_generators(&GroupPresentation::free_group(&names[..2])).len(), 1);
        assert_eq!(commutator_generators(&GroupPresentation::free_group(&names)).len(), 3);
    }
}
