//! Text, JSON and DOT digraph files, function tables and 1-in-3 instances.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use pplab_core::digraph::{make_family, named_digraph, Digraph, Family, MarkedDigraph, Named};
use pplab_core::gadgets::OneInThreeInstance;
use pplab_core::polymorphism::FunctionTable;
use pplab_core::pp::{parse_pp, PPDefinition};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Core(#[from] pplab_core::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// A digraph as read from a file, with its unary marks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphFile {
    pub digraph: Digraph,
    pub marks: Vec<usize>,
}

impl DigraphFile {
    pub fn plain(digraph: Digraph) -> Self {
        DigraphFile {
            digraph,
            marks: Vec::new(),
        }
    }

    /// The marked digraph, when the file has any marks.
    pub fn marked(&self) -> Result<Option<MarkedDigraph>> {
        if self.marks.is_empty() {
            return Ok(None);
        }
        Ok(Some(MarkedDigraph::new(self.digraph.clone(), self.marks.iter().copied())?))
    }
}

impl From<Named> for DigraphFile {
    fn from(n: Named) -> Self {
        match n {
            Named::Plain(d) => DigraphFile::plain(d),
            Named::Marked(m) => DigraphFile {
                marks: m.marks().iter().collect(),
                digraph: m.base().clone(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected a vertex index, found `{tok}`")))
}

/// Reads `n <N>`, `e <u> <v>` and `u <v>` lines; `#` starts a comment.
pub fn parse_text(text: &str) -> Result<DigraphFile> {
    let mut n = None;
    let mut arcs = Vec::new();
    let mut marks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match (toks[0], n) {
            ("n", None) if toks.len() == 2 => n = Some(parse_index(toks[1], line)?),
            ("n", Some(_)) => return Err(syntax(line, "vertex count given twice")),
            (_, None) => return Err(syntax(line, "the first line must be `n <N>`")),
            ("e", Some(size)) if toks.len() == 3 => {
                let (u, v) = (parse_index(toks[1], line)?, parse_index(toks[2], line)?);
                if u >= size || v >= size {
                    return Err(syntax(line, format!("arc ({u}, {v}) outside 0..{size}")));
                }
                arcs.push((u, v));
            }
            ("u", Some(size)) if toks.len() == 2 => {
                let v = parse_index(toks[1], line)?;
                if v >= size {
                    return Err(syntax(line, format!("mark {v} outside 0..{size}")));
                }
                marks.push(v);
            }
            _ => return Err(syntax(line, format!("unrecognized line `{}`", content.trim()))),
        }
    }
    let n = n.ok_or_else(|| syntax(1, "missing `n <N>` line"))?;
    marks.sort_unstable();
    marks.dedup();
    Ok(DigraphFile {
        digraph: Digraph::new(n, arcs)?,
        marks,
    })
}

pub fn write_text(d: &Digraph, marks: &[usize]) -> String {
    let mut s = format!("n {}\n", d.n());
    for &(u, v) in d.arcs() {
        writeln!(s, "e {u} {v}").unwrap();
    }
    for m in marks {
        writeln!(s, "u {m}").unwrap();
    }
    s
}

#[derive(Serialize, Deserialize)]
struct JsonDigraph {
    n: usize,
    arcs: Vec<[usize; 2]>,
    #[serde(default)]
    marks: Vec<usize>,
}

fn json_digraph(d: &Digraph, marks: &[usize]) -> JsonDigraph {
    JsonDigraph {
        n: d.n(),
        arcs: d.arcs().iter().map(|&(u, v)| [u, v]).collect(),
        marks: marks.to_vec(),
    }
}

pub fn to_json_value(d: &Digraph, marks: &[usize]) -> serde_json::Value {
    serde_json::to_value(json_digraph(d, marks)).expect("plain data serializes")
}

pub fn write_json(d: &Digraph, marks: &[usize]) -> String {
    let mut s = serde_json::to_string(&json_digraph(d, marks)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<DigraphFile> {
    let j: JsonDigraph = serde_json::from_str(text)?;
    if let Some(&m) = j.marks.iter().find(|&&m| m >= j.n) {
        return Err(pplab_core::Error::MarkOutOfRange(m, j.n).into());
    }
    let mut marks = j.marks;
    marks.sort_unstable();
    marks.dedup();
    Ok(DigraphFile {
        digraph: Digraph::new(j.n, j.arcs.into_iter().map(|[u, v]| (u, v)))?,
        marks,
    })
}

pub fn write_dot(d: &Digraph, marks: &[usize]) -> String {
    let mut s = String::from("digraph G {\n");
    for v in d.vertices() {
        if marks.contains(&v) {
            writeln!(s, "  {v} [shape=doublecircle];").unwrap();
        } else {
            writeln!(s, "  {v};").unwrap();
        }
    }
    for &(u, v) in d.arcs() {
        writeln!(s, "  {u} -> {v};").unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn write_digraph(d: &Digraph, marks: &[usize], format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => write_text(d, marks),
        OutputFormat::Json => write_json(d, marks),
        OutputFormat::Dot => write_dot(d, marks),
    }
}

/// Text or JSON, told apart by the first non-blank character.
pub fn parse_digraph(text: &str) -> Result<DigraphFile> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

/// Builds a digraph from a name such as `C3plus`, `GU`, `TT4`, `TC5`, `C6`,
/// `K3` or `P4` (the directed path on four vertices).
pub fn builtin(name: &str) -> Result<DigraphFile> {
    if let Ok(n) = named_digraph(name) {
        return Ok(n.into());
    }
    let upper = name.to_ascii_uppercase();
    let sized = |prefix: &str| upper.strip_prefix(prefix).and_then(|k| k.parse::<usize>().ok());
    let d = if let Some(k) = sized("TT") {
        make_family(Family::TransitiveTournament(k))?
    } else if let Some(k) = sized("TC") {
        make_family(Family::Tc(k))?
    } else if let Some(k) = sized("C") {
        make_family(Family::DirectedCycle(k))?
    } else if let Some(k) = sized("K") {
        make_family(Family::Complete(k))?
    } else if let Some(k) = sized("P") {
        if k == 0 {
            return Err(pplab_core::Error::SizeTooSmall { min: 1, got: 0 }.into());
        }
        pplab_core::digraph::directed_path(k)
    } else {
        return Err(pplab_core::Error::UnknownName(name.to_string()).into());
    };
    Ok(DigraphFile::plain(d))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a digraph file, or a built-in digraph when the argument is `@name`.
pub fn load_digraph(arg: &str) -> Result<DigraphFile> {
    match arg.strip_prefix('@') {
        Some(name) => builtin(name),
        None => parse_digraph(&read_to_string(Path::new(arg))?),
    }
}

pub fn load_pp(path: &Path) -> Result<PPDefinition> {
    Ok(parse_pp(&read_to_string(path)?)?)
}

/// Header `arity <n> domain <d>`, then one value per line in row-major order
/// of the argument tuples.
pub fn parse_table(text: &str) -> Result<FunctionTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or_else(|| syntax(1, "empty table file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (arity, domain) = match toks.as_slice() {
        ["arity", a, "domain", d] => (parse_index(a, line)?, parse_index(d, line)?),
        _ => return Err(syntax(line, "expected `arity <n> domain <d>`")),
    };
    let table = lines
        .map(|(line, l)| parse_index(l, line))
        .collect::<Result<Vec<_>>>()?;
    Ok(FunctionTable::new(domain, arity, table)?)
}

pub fn write_table(f: &FunctionTable) -> String {
    let mut s = format!("arity {} domain {}\n", f.arity, f.domain);
    for v in &f.table {
        writeln!(s, "{v}").unwrap();
    }
    s
}

/// `p 1in3 <V> <C>` followed by `C` lines of three 1-based variable ids.
/// Lines starting with `c` are comments.
pub fn parse_cnf(text: &str) -> Result<OneInThreeInstance> {
    let mut header = None;
    let mut clauses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() || content.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match (header, toks.as_slice()) {
            (None, ["p", "1in3", v, c]) => header = Some((parse_index(v, line)?, parse_index(c, line)?)),
            (None, _) => return Err(syntax(line, "expected `p 1in3 <V> <C>`")),
            (Some((vars, _)), [a, b, c]) => {
                let mut clause = [0; 3];
                for (slot, tok) in clause.iter_mut().zip([a, b, c]) {
                    let id = parse_index(tok, line)?;
                    if id == 0 || id > vars {
                        return Err(syntax(line, format!("variable {id} outside 1..={vars}")));
                    }
                    *slot = id - 1;
                }
                clauses.push(clause);
            }
            _ => return Err(syntax(line, "a clause has exactly three variables")),
        }
    }
    let (vars, count) = header.ok_or_else(|| syntax(1, "missing `p 1in3` header"))?;
    if clauses.len() != count {
        return Err(syntax(1, format!("header announces {count} clauses, found {}", clauses.len())));
    }
    Ok(OneInThreeInstance::new(vars, clauses)?)
}

pub fn write_cnf(inst: &OneInThreeInstance) -> String {
    let mut s = format!("p 1in3 {} {}\n", inst.vars(), inst.clauses().len());
    for c in inst.clauses() {
        writeln!(s, "{} {} {}", c[0] + 1, c[1] + 1, c[2] + 1).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_with_marks() {
        let src = "# triangle\nn 3\ne 0 1\ne 1 2 # last\ne 2 0\ne 0 1\nu 2\n";
        let f = parse_text(src).unwrap();
        assert_eq!(f.digraph.arc_count(), 3);
        assert_eq!(f.marks, vec![2]);
        assert_eq!(parse_text(&write_text(&f.digraph, &f.marks)).unwrap(), f);
    }

    #[test]
    fn text_errors_carry_lines() {
        assert!(matches!(parse_text("e 0 1\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_text("n 2\ne 0 2\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(parse_text("n 2\nx\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(parse_text("").is_err());
    }

    #[test]
    fn json_mirror() {
        let f = builtin("GU").unwrap();
        let j = write_json(&f.digraph, &f.marks);
        assert!(j.starts_with("{\"n\":7,\"arcs\":[["));
        assert_eq!(parse_digraph(&j).unwrap(), f);
        assert!(parse_json("{\"n\":2,\"arcs\":[],\"marks\":[5]}").is_err());
    }

    #[test]
    fn dot_lists_every_arc() {
        let d = builtin("C3").unwrap().digraph;
        let dot = write_dot(&d, &[]);
        assert_eq!(dot.matches("->").count(), 3);
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin("TT4").unwrap().digraph.arc_count(), 6);
        assert_eq!(builtin("tc5").unwrap().digraph.n(), 5);
        assert_eq!(builtin("C6").unwrap().digraph.arc_count(), 6);
        assert_eq!(builtin("C3plus").unwrap().digraph.arc_count(), 4);
        assert_eq!(builtin("P4").unwrap().digraph.n(), 4);
        assert!(builtin("Q7").is_err());
    }

    #[test]
    fn tables_round_trip() {
        let f = FunctionTable::projection(3, 2, 1);
        assert_eq!(parse_table(&write_table(&f)).unwrap(), f);
        assert!(parse_table("arity 2 domain 3\n0\n").is_err());
    }

    #[test]
    fn cnf_round_trip() {
        let src = "c two clauses\np 1in3 5 2\n1 2 3\n1 4 5\n";
        let inst = parse_cnf(src).unwrap();
        assert_eq!(inst.clauses(), &[[0, 1, 2], [0, 3, 4]]);
        assert_eq!(parse_cnf(&write_cnf(&inst)).unwrap(), inst);
        assert!(parse_cnf("p 1in3 3 1\n1 2 4\n").is_err());
        assert!(parse_cnf("p 1in3 3 2\n1 2 3\n").is_err());
    }
}
