use std::collections::BTreeSet;

use super::LinkDiagram;
use crate::error::{Error, Result};

/// Grammar (whitespace-insensitive):
///
/// ```text
/// diagram := term (('+' | '⊔') term)*
/// term    := 'U' | 'PD' '[' (tuple (',' tuple)*)? ']'
/// tuple   := 'X' ('(' | '[') int ',' int ',' int ',' int (')' | ']')
/// ```
///
/// Terms are disjoint unions. A later `PD` term whose labels collide with
/// earlier ones is shifted past the largest label seen so far.
pub(super) fn parse(text: &str) -> Result<LinkDiagram> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let mut crossings: Vec<[u32; 4]> = Vec::new();
    let mut unknots = 0;
    let mut used: BTreeSet<u32> = BTreeSet::new();

    loop {
        p.skip_ws();
        match p.peek() {
            Some('U') => {
                p.pos += 1;
                unknots += 1;
            }
            Some('P') => {
                let mut term = p.pd_term()?;
                let labels: BTreeSet<u32> = term.iter().flatten().copied().collect();
                if !labels.is_disjoint(&used) {
                    let shift = *used.iter().next_back().expect("nonempty when overlapping");
                    for t in &mut term {
                        for x in t.iter_mut() {
                            *x += shift;
                        }
                    }
                }
                used.extend(term.iter().flatten().copied());
                crossings.extend(term);
            }
            Some(c) => return Err(p.error(format!("expected 'PD[' or 'U', found '{c}'"))),
            None => return Err(p.error("expected 'PD[' or 'U', found end of input".into())),
        }
        p.skip_ws();
        match p.peek() {
            None => break,
            Some('+') | Some('⊔') => p.pos += 1,
            Some(c) => return Err(p.error(format!("expected '+' between terms, found '{c}'"))),
        }
    }
    LinkDiagram::new(crossings, unknots)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, reason: String) -> Error {
        Error::Syntax {
            position: self.pos,
            reason,
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an arc number".into()));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| Error::Syntax {
            position: start,
            reason: format!("arc number {digits} out of range"),
        })
    }

    fn pd_term(&mut self) -> Result<Vec<[u32; 4]>> {
        self.expect('P')?;
        self.expect('D')?;
        self.expect('[')?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            self.expect('X')?;
            self.skip_ws();
            let close = match self.peek() {
                Some('(') => ')',
                Some('[') => ']',
                _ => return Err(self.error("expected '(' or '[' after 'X'".into())),
            };
            self.pos += 1;
            let mut tuple = [0u32; 4];
            for (i, slot) in tuple.iter_mut().enumerate() {
                if i > 0 {
                    self.expect(',')?;
                }
                *slot = self.number()?;
            }
            self.expect(close)?;
            out.push(tuple);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error("expected ',' or ']' after a crossing".into())),
            }
        }
    }
}
