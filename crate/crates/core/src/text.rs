//! Line-oriented text formats for trees, grammars, CFGs and automata.
//!
//! Grammar files:
//!
//! ```text
//! # comment
//! start: S
//! init: (S a)
//! aux beta: (S a S*)
//! ```
//!
//! Trees are parenthesized; `X*` marks a foot, `@a` an anchor and `<eps>` the
//! empty leaf. Non-terminals start with an upper-case letter.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::automaton::{StateId, TreeAutomaton};
use crate::grammar::{validate_grammar, NamedTree, TagGrammar, TreeKind};
use crate::lexicalizer::{Cfg, Production};
use crate::tree::{Symbol, Tree, EPSILON_NAME};

/// A syntax or validation error with a 1-based source position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        FormatError { line, column, message: message.into() }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn valid_name(name: &str) -> bool {
    name == EPSILON_NAME || (!name.is_empty() && name.chars().all(is_name_char))
}

struct TreeParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col_offset: usize,
    foot_columns: Vec<usize>,
}

impl TreeParser {
    fn new(src: &str, line: usize, col_offset: usize) -> Self {
        TreeParser { chars: src.chars().collect(), pos: 0, line, col_offset, foot_columns: Vec::new() }
    }

    fn column(&self) -> usize {
        self.col_offset + self.pos + 1
    }

    fn err(&self, message: impl Into<String>) -> FormatError {
        FormatError::new(self.line, self.column(), message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<(String, usize), FormatError> {
        let start = self.pos;
        let column = self.column();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '(' || c == ')' || c == '*' {
                break;
            }
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if !valid_name(&text) {
            return Err(FormatError::new(self.line, column, format!("bad symbol {text:?}")));
        }
        Ok((text, column))
    }

    fn tree(&mut self) -> Result<Tree, FormatError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("expected a tree")),
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let (name, column) = self.atom()?;
                let label = Symbol::classify(&name);
                if !label.is_nonterminal() {
                    return Err(FormatError::new(self.line, column, format!("interior node {name} is not a non-terminal")));
                }
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        None => return Err(self.err("unclosed parenthesis")),
                        _ => children.push(self.tree()?),
                    }
                }
                if children.is_empty() {
                    return Err(self.err("empty node list"));
                }
                Ok(Tree::node(label, children))
            }
            Some(')') => Err(self.err("unexpected ')'")),
            Some(_) => {
                let anchor = self.peek() == Some('@');
                if anchor {
                    self.pos += 1;
                }
                let (name, column) = self.atom()?;
                let label = Symbol::classify(&name);
                let foot = self.peek() == Some('*');
                if foot {
                    self.pos += 1;
                    if !label.is_nonterminal() {
                        return Err(FormatError::new(self.line, column, "foot must be a non-terminal"));
                    }
                    self.foot_columns.push(column);
                }
                if anchor && !label.is_terminal() {
                    return Err(FormatError::new(self.line, column, "anchor must be a terminal"));
                }
                Ok(Tree { label, children: Vec::new(), foot, anchor })
            }
        }
    }

    fn finish(&mut self) -> Result<(), FormatError> {
        self.skip_ws();
        match self.peek() {
            None | Some('#') => Ok(()),
            Some(_) => Err(self.err("trailing input after tree")),
        }
    }
}

/// Parses one bracketed tree.
pub fn parse_tree(text: &str) -> Result<Tree, FormatError> {
    let mut p = TreeParser::new(text, 1, 0);
    let tree = p.tree()?;
    p.finish()?;
    Ok(tree)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn column_of(line: &str, sub: &str) -> usize {
    line[..sub.as_ptr() as usize - line.as_ptr() as usize].chars().count() + 1
}

/// Parses a grammar file and validates the result.
pub fn parse_grammar_file(text: &str) -> Result<TagGrammar, FormatError> {
    let mut start = None;
    let mut initial = Vec::new();
    let mut auxiliary = Vec::new();
    let mut tree_lines: HashMap<String, usize> = HashMap::new();
    let mut extra_terminals = BTreeSet::new();
    let mut extra_nonterminals = BTreeSet::new();
    let mut unnamed = (0usize, 0usize);

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let Some(colon) = line.find(':') else {
            let col = column_of(raw, line.trim_start());
            return Err(FormatError::new(line_no, col, "expected `start:`, `init:` or `aux:`"));
        };
        let head = line[..colon].trim();
        let body = &line[colon + 1..];
        let body_col = column_of(raw, body);
        let mut words = head.split_whitespace();
        let keyword = words.next().unwrap_or("");
        let name = words.next();
        if words.next().is_some() {
            return Err(FormatError::new(line_no, column_of(raw, head), "too many words before ':'"));
        }
        match keyword {
            "start" => {
                let sym = body.trim();
                if !Symbol::classify(sym).is_nonterminal() || !valid_name(sym) {
                    return Err(FormatError::new(line_no, body_col, format!("start symbol {sym:?} is not a non-terminal")));
                }
                if start.is_some() {
                    return Err(FormatError::new(line_no, 1, "duplicate start symbol"));
                }
                start = Some(Symbol::nonterminal(sym));
            }
            "terminals" | "nonterminals" => {
                for word in body.split_whitespace() {
                    let sym = Symbol::classify(word);
                    let ok = valid_name(word)
                        && if keyword == "terminals" { sym.is_terminal() } else { sym.is_nonterminal() };
                    if !ok {
                        return Err(FormatError::new(line_no, column_of(raw, word), format!("bad {keyword} entry {word:?}")));
                    }
                    if keyword == "terminals" {
                        extra_terminals.insert(sym);
                    } else {
                        extra_nonterminals.insert(sym);
                    }
                }
            }
            "init" | "aux" => {
                let mut p = TreeParser::new(body, line_no, body_col - 1);
                let tree = p.tree()?;
                p.finish()?;
                if p.foot_columns.len() > 1 {
                    return Err(FormatError::new(line_no, p.foot_columns[1], "tree has more than one foot"));
                }
                let is_init = keyword == "init";
                let name = match name {
                    Some(n) => n.to_string(),
                    None if is_init => {
                        unnamed.0 += 1;
                        format!("a{}", unnamed.0)
                    }
                    None => {
                        unnamed.1 += 1;
                        format!("b{}", unnamed.1)
                    }
                };
                if tree_lines.insert(name.clone(), line_no).is_some() {
                    return Err(FormatError::new(line_no, 1, format!("duplicate tree name {name}")));
                }
                let named = NamedTree::new(name, tree);
                if is_init {
                    initial.push(named);
                } else {
                    auxiliary.push(named);
                }
            }
            other => {
                return Err(FormatError::new(line_no, column_of(raw, head), format!("unknown directive {other:?}")));
            }
        }
    }

    let start = start.ok_or_else(|| FormatError::new(1, 1, "no start symbol"))?;
    let mut g = TagGrammar::new(start, initial, auxiliary);
    g.terminals.extend(extra_terminals);
    g.nonterminals.extend(extra_nonterminals);
    if let Some(v) = validate_grammar(&g).into_iter().next() {
        let line = v.tree.as_ref().and_then(|n| tree_lines.get(n)).copied().unwrap_or(1);
        return Err(FormatError::new(line, 1, v.to_string()));
    }
    Ok(g)
}

/// Renders a grammar in the file format; `parse_grammar_file` inverts it.
pub fn render_grammar(g: &TagGrammar) -> String {
    let mut out = String::new();
    writeln!(out, "start: {}", g.start).unwrap();
    let mut inferred = TagGrammar::new(g.start.clone(), g.initial.clone(), g.auxiliary.clone());
    inferred.infer_alphabets();
    let extra_t: Vec<String> = g.terminals.difference(&inferred.terminals).map(|s| s.to_string()).collect();
    let extra_n: Vec<String> = g.nonterminals.difference(&inferred.nonterminals).map(|s| s.to_string()).collect();
    if !extra_t.is_empty() {
        writeln!(out, "terminals: {}", extra_t.join(" ")).unwrap();
    }
    if !extra_n.is_empty() {
        writeln!(out, "nonterminals: {}", extra_n.join(" ")).unwrap();
    }
    for (kind, named) in g.elementary() {
        let keyword = match kind {
            TreeKind::Initial => "init",
            TreeKind::Auxiliary => "aux",
        };
        writeln!(out, "{keyword} {}: {}", named.name, named.tree).unwrap();
    }
    out
}

/// Parses a CFG file: `LHS -> sym sym ...`, `LHS -> <eps>`, optional
/// `start: X` header, `#` comments. Without a header the first production's
/// left-hand side is the start symbol.
pub fn parse_cfg_file(text: &str) -> Result<Cfg, FormatError> {
    let mut start = None;
    let mut productions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("start:") {
            let sym = rest.trim();
            if !Symbol::classify(sym).is_nonterminal() || !valid_name(sym) {
                return Err(FormatError::new(line_no, column_of(raw, trimmed), format!("bad start symbol {sym:?}")));
            }
            start = Some(Symbol::nonterminal(sym));
            continue;
        }
        let Some(arrow) = line.find("->") else {
            let col = line.find(['-', '>', '=']).map_or_else(|| column_of(raw, trimmed), |p| p + 1);
            return Err(FormatError::new(line_no, col, "expected `->`"));
        };
        let lhs = line[..arrow].trim();
        if !valid_name(lhs) || !Symbol::classify(lhs).is_nonterminal() {
            return Err(FormatError::new(line_no, column_of(raw, trimmed), format!("left-hand side {lhs:?} is not a non-terminal")));
        }
        let rhs_text = &line[arrow + 2..];
        let mut rhs = Vec::new();
        for word in rhs_text.split_whitespace() {
            if !valid_name(word) {
                return Err(FormatError::new(line_no, column_of(raw, word), format!("bad symbol {word:?}")));
            }
            rhs.push(Symbol::classify(word));
        }
        if rhs.iter().any(Symbol::is_epsilon) {
            if rhs.len() != 1 {
                return Err(FormatError::new(line_no, column_of(raw, rhs_text.trim_start()), "<eps> must stand alone"));
            }
            rhs.clear();
        } else if rhs.is_empty() {
            return Err(FormatError::new(line_no, arrow + 3, "empty right-hand side (write <eps>)"));
        }
        productions.push(Production { lhs: Symbol::nonterminal(lhs), rhs });
    }
    let start = start
        .or_else(|| productions.first().map(|p: &Production| p.lhs.clone()))
        .ok_or_else(|| FormatError::new(1, 1, "no productions and no start symbol"))?;
    Ok(Cfg::new(start, productions))
}

pub fn render_cfg(c: &Cfg) -> String {
    let mut out = String::new();
    writeln!(out, "start: {}", c.start).unwrap();
    for p in &c.productions {
        writeln!(out, "{p}").unwrap();
    }
    out
}

/// Renders an automaton: `state`, `final` and `trans` lines in a fixed order.
pub fn render_automaton(a: &TreeAutomaton) -> String {
    let mut out = String::new();
    for name in &a.state_names {
        writeln!(out, "state {name}").unwrap();
    }
    for q in &a.finals {
        writeln!(out, "final {}", a.state_names[q.0]).unwrap();
    }
    for ((sym, children), targets) in &a.transitions {
        for q in targets {
            write!(out, "trans {sym}").unwrap();
            for c in children {
                write!(out, " {}", a.state_names[c.0]).unwrap();
            }
            writeln!(out, " -> {}", a.state_names[q.0]).unwrap();
        }
    }
    out
}

/// Parses the automaton format. The alphabet is the set of symbols used in
/// transitions.
pub fn parse_automaton(text: &str) -> Result<TreeAutomaton, FormatError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, StateId> = HashMap::new();
    let mut finals = BTreeSet::new();
    let mut transitions: BTreeMap<(Symbol, Vec<StateId>), BTreeSet<StateId>> = BTreeMap::new();
    let mut alphabet = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let words: Vec<&str> = line.split_whitespace().collect();
        let Some(&keyword) = words.first() else { continue };
        let lookup = |w: &str, index: &HashMap<String, StateId>| {
            index.get(w).copied().ok_or_else(|| FormatError::new(line_no, column_of(raw, w), format!("undeclared state {w}")))
        };
        match keyword {
            "state" if words.len() == 2 => {
                if !index.contains_key(words[1]) {
                    index.insert(words[1].to_string(), StateId(names.len()));
                    names.push(words[1].to_string());
                }
            }
            "final" if words.len() == 2 => {
                finals.insert(lookup(words[1], &index)?);
            }
            "trans" if words.len() >= 4 && words[words.len() - 2] == "->" => {
                let sym_word = words[1];
                if !valid_name(sym_word) {
                    return Err(FormatError::new(line_no, column_of(raw, sym_word), format!("bad symbol {sym_word:?}")));
                }
                let sym = Symbol::classify(sym_word);
                let mut children = Vec::new();
                for w in &words[2..words.len() - 2] {
                    children.push(lookup(w, &index)?);
                }
                let target = lookup(words[words.len() - 1], &index)?;
                alphabet.insert(sym.clone());
                transitions.entry((sym, children)).or_default().insert(target);
            }
            _ => return Err(FormatError::new(line_no, column_of(raw, keyword), "malformed automaton line")),
        }
    }
    Ok(TreeAutomaton::from_parts(alphabet, names, finals, transitions))
}

/// One `(tree)` per line.
pub fn render_trees<'a>(trees: impl IntoIterator<Item = &'a Tree>) -> String {
    let mut out = String::new();
    for t in trees {
        writeln!(out, "{t}").unwrap();
    }
    out
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        if self.rhs.is_empty() {
            return write!(f, " {EPSILON_NAME}");
        }
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}
