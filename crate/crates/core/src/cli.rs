//! Command-line surface: text formats, command dispatch and report output.
//!
//! Formats (all indices 0-based, `#` starts a comment):
//!
//! * `graph`: header `n m`, then `m` lines `u v [w]`; weights are all-or-none.
//! * `sldag`: header `n m`, a line `layers L`, a line of `n` layer numbers in
//!   `1..=L`, then `m` edge lines as for `graph`.
//! * `matrix`: header `n` (square) or `rows cols`, then one row per line.
//! * `cnf2`: DIMACS `p cnf V C` with one or two literals per clause; lines
//!   starting with `c` are comments.
//!
//! Exit codes: 0 success, 2 usage error, 3 parse or invariant error, 4 budget
//! exceeded or failed internal check.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clowdet::{charpoly_coeffs, det_via_clows, det_via_ha, rank_of};
use crate::graphs::{count_st_paths, Digraph, LayeredDag};
use crate::isolation::{is_min_unique, is_pair_isolated, random_weighting};
use crate::matred::{itmatprod_to_powerelement, linsys_feasible, powerelement_entry_to_det, Feasibility};
use crate::matrix::{det_bareiss, IntMatrix};
use crate::ndsim::{inductive_layer_counts, nonreach_nd, run_all_paths, sharplcfl, ul_reach, Budget};
use crate::reductions::{dstcon_to_unsat2cnf, implication_graph, twosat_satisfiable, unroll_to_sldag, Lit, TwoCnf};
use crate::{Error, Result};

/// Seed used by randomized commands when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 42;

/// Input formats understood by [`parse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Graph,
    Sldag,
    Matrix,
    Cnf2,
}

/// A parsed and validated input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Graph(Digraph),
    Sldag(LayeredDag),
    Matrix(IntMatrix),
    Cnf(TwoCnf),
}

/// Non-empty lines split into tokens with 1-based line and column numbers.
struct Lexer {
    lines: Vec<(usize, Vec<(usize, String)>)>,
    pos: usize,
    last_line: usize,
}

impl Lexer {
    fn new(text: &str, comment: impl Fn(&str) -> Option<usize>) -> Self {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let body = match comment(raw) {
                Some(cut) => &raw[..cut],
                None => raw,
            };
            let mut toks = Vec::new();
            let mut start = None;
            for (j, ch) in body.char_indices().chain([(body.len(), ' ')]) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(j),
                    (true, Some(s)) => {
                        toks.push((body[..s].chars().count() + 1, body[s..j].to_string()));
                        start = None;
                    }
                    _ => {}
                }
            }
            if !toks.is_empty() {
                lines.push((i + 1, toks));
            }
        }
        let last_line = text.lines().count().max(1);
        Lexer {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, Vec<(usize, String)>)> {
        let line = self.lines.get(self.pos).cloned().ok_or_else(|| Error::Parse {
            line: self.last_line,
            column: 1,
            message: format!("unexpected end of input, expected {what}"),
        })?;
        self.pos += 1;
        Ok(line)
    }

    fn finish(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            Some((line, toks)) => Err(Error::Parse {
                line: *line,
                column: toks[0].0,
                message: "unexpected trailing input".into(),
            }),
            None => Ok(()),
        }
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, (col, tok): &(usize, String), what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, *col, format!("expected {what}, found `{tok}`")))
}

fn arity(line: usize, toks: &[(usize, String)], allowed: &[usize], what: &str) -> Result<()> {
    if allowed.contains(&toks.len()) {
        return Ok(());
    }
    let col = toks.get(*allowed.iter().max().unwrap_or(&0)).map_or(1, |t| t.0);
    Err(parse_err(line, col, format!("expected {what}")))
}

fn hash_comment(line: &str) -> Option<usize> {
    line.find('#')
}

type EdgeLine = (usize, usize, Option<BigInt>);

fn parse_edges(lx: &mut Lexer, m: usize) -> Result<Vec<EdgeLine>> {
    let mut edges = Vec::with_capacity(m);
    let mut weighted: Option<bool> = None;
    for _ in 0..m {
        let (line, toks) = lx.next_line("an edge line `u v [w]`")?;
        arity(line, &toks, &[2, 3], "an edge line `u v [w]`")?;
        let u = number(line, &toks[0], "a vertex")?;
        let v = number(line, &toks[1], "a vertex")?;
        let w = toks.get(2).map(|t| number::<BigInt>(line, t, "an integer weight")).transpose()?;
        if *weighted.get_or_insert(w.is_some()) != w.is_some() {
            return Err(parse_err(line, toks[0].0, "weights must be given on every edge or on none"));
        }
        edges.push((u, v, w));
    }
    Ok(edges)
}

fn build_graph(n: usize, edges: Vec<EdgeLine>) -> Result<Digraph> {
    if edges.first().is_some_and(|e| e.2.is_some()) {
        Digraph::with_weights(n, edges.into_iter().map(|(u, v, w)| (u, v, w.expect("all weighted"))))
    } else {
        Digraph::new(n, edges.into_iter().map(|(u, v, _)| (u, v)))
    }
}

fn parse_header(lx: &mut Lexer) -> Result<(usize, usize)> {
    let (line, toks) = lx.next_line("a header `n m`")?;
    arity(line, &toks, &[2], "a header `n m`")?;
    Ok((number(line, &toks[0], "a vertex count")?, number(line, &toks[1], "an edge count")?))
}

fn parse_graph(text: &str) -> Result<Digraph> {
    let mut lx = Lexer::new(text, hash_comment);
    let (n, m) = parse_header(&mut lx)?;
    let edges = parse_edges(&mut lx, m)?;
    lx.finish()?;
    build_graph(n, edges)
}

fn parse_sldag(text: &str) -> Result<LayeredDag> {
    let mut lx = Lexer::new(text, hash_comment);
    let (n, m) = parse_header(&mut lx)?;
    let (line, toks) = lx.next_line("`layers L`")?;
    arity(line, &toks, &[2], "`layers L`")?;
    if toks[0].1 != "layers" {
        return Err(parse_err(line, toks[0].0, "expected `layers L`"));
    }
    let layer_count: usize = number(line, &toks[1], "a layer count")?;
    let mut layer = Vec::with_capacity(n);
    if n > 0 {
        let (line, toks) = lx.next_line("the per-vertex layer line")?;
        if toks.len() != n {
            return Err(parse_err(line, toks[0].0, format!("expected {n} layer numbers, found {}", toks.len())));
        }
        for t in &toks {
            layer.push(number(line, t, "a layer number")?);
        }
    }
    let edges = parse_edges(&mut lx, m)?;
    lx.finish()?;
    LayeredDag::new(build_graph(n, edges)?, layer, layer_count)
}

fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut lx = Lexer::new(text, hash_comment);
    let (line, toks) = lx.next_line("a header `n` or `rows cols`")?;
    arity(line, &toks, &[1, 2], "a header `n` or `rows cols`")?;
    let rows: usize = number(line, &toks[0], "a dimension")?;
    let cols: usize = match toks.get(1) {
        Some(t) => number(line, t, "a dimension")?,
        None => rows,
    };
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (line, toks) = lx.next_line("a matrix row")?;
        if toks.len() != cols {
            return Err(parse_err(line, toks[0].0, format!("expected {cols} entries, found {}", toks.len())));
        }
        data.push(
            toks.iter()
                .map(|t| number(line, t, "an integer"))
                .collect::<Result<Vec<BigInt>>>()?,
        );
    }
    lx.finish()?;
    if rows == 0 {
        return Ok(IntMatrix::zeros(0, cols));
    }
    IntMatrix::from_rows(&data)
}

fn parse_cnf2(text: &str) -> Result<TwoCnf> {
    let mut lx = Lexer::new(text, |l| l.trim_start().starts_with('c').then_some(0));
    let (line, toks) = lx.next_line("a header `p cnf V C`")?;
    if toks.len() != 4 || toks[0].1 != "p" || toks[1].1 != "cnf" {
        return Err(parse_err(line, toks[0].0, "expected a header `p cnf V C`"));
    }
    let vars: usize = number(line, &toks[2], "a variable count")?;
    let count: usize = number(line, &toks[3], "a clause count")?;
    let mut clauses = Vec::with_capacity(count);
    let mut current: Vec<Lit> = Vec::new();
    let mut at = (line, toks[0].0);
    while let Some((line, toks)) = lx.lines.get(lx.pos).cloned() {
        lx.pos += 1;
        for tok in &toks {
            at = (line, tok.0);
            let x: i64 = number(line, tok, "a literal")?;
            if x == 0 {
                match current.as_slice() {
                    [a] => clauses.push((*a, *a)),
                    [a, b] => clauses.push((*a, *b)),
                    _ => return Err(parse_err(line, tok.0, "a clause needs one or two literals")),
                }
                current.clear();
                continue;
            }
            if x.unsigned_abs() > vars as u64 {
                return Err(parse_err(line, tok.0, format!("literal {x} exceeds {vars} variables")));
            }
            if current.len() == 2 {
                return Err(parse_err(line, tok.0, "more than two literals in a clause"));
            }
            current.push(Lit::from_dimacs(x)?);
        }
    }
    if !current.is_empty() {
        return Err(parse_err(at.0, at.1, "clause not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(parse_err(
            at.0,
            at.1,
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    TwoCnf::new(vars, clauses)
}

/// Parses `text` in `format` and validates it.
pub fn parse(text: &str, format: Format) -> Result<Instance> {
    Ok(match format {
        Format::Graph => Instance::Graph(parse_graph(text)?),
        Format::Sldag => Instance::Sldag(parse_sldag(text)?),
        Format::Matrix => Instance::Matrix(parse_matrix(text)?),
        Format::Cnf2 => Instance::Cnf(parse_cnf2(text)?),
    })
}

fn push_edges(out: &mut String, g: &Digraph) {
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        match g.weights() {
            Some(w) => writeln!(out, "{u} {v} {}", w[i]),
            None => writeln!(out, "{u} {v}"),
        }
        .expect("writing to a String");
    }
}

/// Serializes a digraph in the `graph` format.
pub fn format_graph(g: &Digraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    push_edges(&mut out, g);
    out
}

/// Serializes a layered DAG in the `sldag` format.
pub fn format_sldag(d: &LayeredDag) -> String {
    let g = d.graph();
    let layers: Vec<String> = d.layers().iter().map(ToString::to_string).collect();
    let mut out = format!(
        "{} {}\nlayers {}\n{}\n",
        g.vertex_count(),
        g.edge_count(),
        d.layer_count(),
        layers.join(" ")
    );
    push_edges(&mut out, g);
    out
}

/// Serializes a matrix in the `matrix` format.
pub fn format_matrix(a: &IntMatrix) -> String {
    let mut out = if a.is_square() {
        format!("{}\n", a.rows())
    } else {
        format!("{} {}\n", a.rows(), a.cols())
    };
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub result: String,
    /// Named integer quantities, as decimal strings.
    pub counts: BTreeMap<String, String>,
    pub witness: Option<String>,
    pub seed: Option<u64>,
}

impl Report {
    fn new(command: &str, result: impl ToString) -> Self {
        Report {
            command: command.to_string(),
            result: result.to_string(),
            counts: BTreeMap::new(),
            witness: None,
            seed: None,
        }
    }

    fn count(mut self, key: &str, value: impl ToString) -> Self {
        self.counts.insert(key.to_string(), value.to_string());
        self
    }

    fn witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    /// Human-readable rendering: the result, then `key: value` lines. When
    /// the result is a multi-line instance those lines become `#` comments,
    /// so the output parses back as input.
    pub fn to_text(&self) -> String {
        let mut out = self.result.clone();
        if !out.ends_with('\n') {
            out.push('\n');
        }
        let prefix = if self.result.trim_end().contains('\n') { "# " } else { "" };
        for (k, v) in &self.counts {
            writeln!(out, "{prefix}{k}: {v}").expect("writing to a String");
        }
        if let Some(w) = &self.witness {
            writeln!(out, "{prefix}witness: {w}").expect("writing to a String");
        }
        if let Some(s) = self.seed {
            writeln!(out, "{prefix}seed: {s}").expect("writing to a String");
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Parser, Debug)]
#[command(name = "logcount", version, about = "Exact counting for logspace counting classes")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct StArgs {
    /// Input file, or `-` for stdin.
    file: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    /// Read the file in the `sldag` format instead of `graph`.
    #[arg(long)]
    sldag: bool,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Input file, or `-` for stdin.
    file: PathBuf,
    #[arg(long)]
    s1: usize,
    #[arg(long)]
    t1: usize,
    #[arg(long)]
    s2: usize,
    #[arg(long)]
    t2: usize,
    #[arg(long)]
    sldag: bool,
}

#[derive(Args, Debug)]
struct ModArgs {
    /// Input file, or `-` for stdin.
    file: PathBuf,
    /// Modulus.
    #[arg(long)]
    k: u64,
    #[arg(long)]
    s1: usize,
    #[arg(long)]
    t1: usize,
    /// Optional second pair; the gap `f1 - f2` is then tested.
    #[arg(long, requires = "t2")]
    s2: Option<usize>,
    #[arg(long, requires = "s2")]
    t2: Option<usize>,
    #[arg(long)]
    sldag: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count s-t paths.
    CountPaths(StArgs),
    /// Run a reduction and print the produced instance.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Determinant of a square matrix.
    Det {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = DetMethod::Ha)]
        method: DetMethod,
    },
    /// Coefficients c_0 .. c_n of det(xI - A).
    Charpoly { file: PathBuf },
    /// Rank over the rationals.
    Rank { file: PathBuf },
    /// Satisfiability of a 2-CNF formula.
    Twosat { file: PathBuf },
    /// Feasibility of Ax = b over the rationals.
    Linsys {
        file: PathBuf,
        /// Right-hand side, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        rhs: Vec<BigInt>,
    },
    /// Frequency of min-unique random weightings.
    Isolate {
        file: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Weight range [1, r]; defaults to 4|E| + 1.
        #[arg(long)]
        r: Option<u64>,
    },
    /// Run a nondeterministic program under the path-counting interpreter.
    #[command(subcommand)]
    Ndsim(NdsimCmd),
    /// Decide a counting problem on path counts.
    #[command(subcommand)]
    Decide(DecideCmd),
}

#[derive(Subcommand, Debug)]
enum ReduceCmd {
    /// Unroll a digraph into a layered DAG.
    Unroll {
        file: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Reachability to an unsatisfiable 2-CNF.
    #[command(name = "2cnf")]
    TwoCnf {
        file: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// 2-CNF to its implication graph.
    #[command(name = "from-2cnf")]
    From2Cnf { file: PathBuf },
    /// An entry of A^m to a determinant.
    PowerToDet {
        file: PathBuf,
        #[arg(long)]
        m: usize,
        /// Row, 1-based.
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Column, 1-based; defaults to n.
        #[arg(long)]
        j: Option<usize>,
    },
    /// A product of matrices to a block of a matrix power.
    Itmatprod {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum NdsimCmd {
    /// Nonreachability by inductive counting.
    Is(StArgs),
    /// Unambiguous reachability on a min-unique weighted graph.
    Ul {
        file: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Choose k distinct s-t paths; accepting paths number C(f, k).
    Sharplcfl {
        #[command(flatten)]
        st: StArgs,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum DecideCmd {
    /// f1 = f2.
    Exact(PairArgs),
    /// Prints f1 - f2.
    Gap(PairArgs),
    /// f1 - f2 > 0.
    Prob(PairArgs),
    /// f not divisible by k, for k >= 2.
    Mod(ModArgs),
    /// f not divisible by k, for any k >= 1.
    Modl(ModArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum DetMethod {
    /// Clow-sequence enumeration (n <= 5).
    Clow,
    /// Path weights in H_A.
    Ha,
    /// Fraction-free elimination.
    Oracle,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read_input(path: &Path) -> std::result::Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> std::result::Result<Digraph, Failure> {
    Ok(parse_graph(&read_input(path)?)?)
}

fn load_matrix(path: &Path) -> std::result::Result<IntMatrix, Failure> {
    Ok(parse_matrix(&read_input(path)?)?)
}

enum Counted {
    Graph(Digraph),
    Dag(LayeredDag),
}

impl Counted {
    fn load(path: &Path, sldag: bool) -> std::result::Result<Self, Failure> {
        let text = read_input(path)?;
        Ok(if sldag {
            Counted::Dag(parse_sldag(&text)?)
        } else {
            Counted::Graph(parse_graph(&text)?)
        })
    }

    fn count(&self, s: usize, t: usize) -> Result<BigUint> {
        match self {
            Counted::Graph(g) => count_st_paths(g, s, t),
            Counted::Dag(d) => count_st_paths(d, s, t),
        }
    }

    /// A layered DAG together with the images of `s` and `t`.
    fn layered(self, s: usize, t: usize) -> Result<(LayeredDag, usize, usize)> {
        match self {
            Counted::Dag(d) => Ok((d, s, t)),
            Counted::Graph(g) => unroll_to_sldag(&g, s, t),
        }
    }
}

fn decide_mod(name: &str, a: &ModArgs, min_k: u64) -> std::result::Result<Report, Failure> {
    if a.k < min_k {
        return Err(Error::arg(format!("k must be at least {min_k}")).into());
    }
    let inst = Counted::load(&a.file, a.sldag)?;
    let f1 = BigInt::from(inst.count(a.s1, a.t1)?);
    let mut r = Report::new(name, "").count("f1", &f1).count("k", a.k);
    let f = match (a.s2, a.t2) {
        (Some(s2), Some(t2)) => {
            let f2 = BigInt::from(inst.count(s2, t2)?);
            r = r.count("f2", &f2);
            f1 - f2
        }
        _ => f1,
    };
    r.result = yes_no(!(f % a.k).is_zero()).to_string();
    Ok(r)
}

fn dispatch(cmd: Command) -> std::result::Result<Report, Failure> {
    let budget = Budget::default();
    Ok(match cmd {
        Command::CountPaths(a) => {
            let inst = Counted::load(&a.file, a.sldag)?;
            Report::new("count-paths", inst.count(a.s, a.t)?)
        }
        Command::Reduce(r) => match r {
            ReduceCmd::Unroll { file, s, t } => {
                let (d, s2, t2) = unroll_to_sldag(&load_graph(&file)?, s, t)?;
                let text = format!("# s = {s2}, t = {t2}\n{}", format_sldag(&d));
                Report::new("reduce unroll", text).count("s", s2).count("t", t2)
            }
            ReduceCmd::TwoCnf { file, s, t } => {
                let phi = dstcon_to_unsat2cnf(&load_graph(&file)?, s, t)?;
                Report::new("reduce 2cnf", phi.to_dimacs())
            }
            ReduceCmd::From2Cnf { file } => {
                let phi = parse_cnf2(&read_input(&file)?)?;
                let text = format!("# vertex 2x + b is literal x, negated when b = 1\n{}", format_graph(&implication_graph(&phi)));
                Report::new("reduce from-2cnf", text)
            }
            ReduceCmd::PowerToDet { file, m, i, j } => {
                let a = load_matrix(&file)?;
                let j = j.unwrap_or(a.order()?);
                let b = powerelement_entry_to_det(&a, i, j, m)?;
                Report::new("reduce power-to-det", format_matrix(&b))
            }
            ReduceCmd::Itmatprod { files } => {
                let mats = files
                    .iter()
                    .map(|f| load_matrix(f))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                let p = itmatprod_to_powerelement(&mats)?;
                Report::new("reduce itmatprod", format_matrix(&p.b))
                    .count("power", p.power)
                    .count("block_row", p.block_row)
                    .count("block_col", p.block_col)
                    .count("block", p.block)
            }
        },
        Command::Det { file, method } => {
            let a = load_matrix(&file)?;
            let d = match method {
                DetMethod::Clow => det_via_clows(&a)?,
                DetMethod::Ha => det_via_ha(&a)?,
                DetMethod::Oracle => det_bareiss(&a)?,
            };
            Report::new("det", d)
        }
        Command::Charpoly { file } => {
            let c = charpoly_coeffs(&load_matrix(&file)?)?;
            let text: Vec<String> = c.iter().map(ToString::to_string).collect();
            c.iter()
                .enumerate()
                .fold(Report::new("charpoly", text.join(" ")), |r, (i, x)| r.count(&format!("c{i}"), x))
        }
        Command::Rank { file } => Report::new("rank", rank_of(&load_matrix(&file)?)?),
        Command::Twosat { file } => {
            let res = twosat_satisfiable(&parse_cnf2(&read_input(&file)?)?)?;
            let r = Report::new("twosat", if res.satisfiable { "satisfiable" } else { "unsatisfiable" });
            match res.assignment {
                Some(a) => {
                    let lits: Vec<String> = a
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| (if b { Lit::pos(i) } else { Lit::neg(i) }).to_dimacs().to_string())
                        .collect();
                    r.witness(lits.join(" "))
                }
                None => r,
            }
        }
        Command::Linsys { file, rhs } => match linsys_feasible(&load_matrix(&file)?, &rhs)? {
            Feasibility::Feasible(x) => Report::new("linsys", "feasible").witness(join(&x)),
            Feasibility::Infeasible(y) => Report::new("linsys", "infeasible").witness(join(&y)),
        },
        Command::Isolate {
            file,
            s,
            t,
            trials,
            seed,
            r,
        } => {
            let g = load_graph(&file)?.unweighted();
            g.check_vertex(s)?;
            g.check_vertex(t)?;
            if trials == 0 {
                return Err(Error::arg("trials must be positive").into());
            }
            let r = r.unwrap_or(4 * g.edge_count() as u64 + 1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut unique, mut pair) = (0u64, 0u64);
            let mut witness = None;
            for _ in 0..trials {
                let w = random_weighting(&g, r, &mut rng)?;
                pair += u64::from(is_pair_isolated(&w, s, t)?);
                if is_min_unique(&w, Some(s))? {
                    unique += 1;
                    witness.get_or_insert_with(|| join(w.weights().unwrap_or(&[])));
                }
            }
            let mut rep = Report::new("isolate", format!("{unique}/{trials}"))
                .count("trials", trials)
                .count("min_unique", unique)
                .count("pair_isolated", pair)
                .count("r", r);
            rep.witness = witness;
            rep.seed = Some(seed);
            rep
        }
        Command::Ndsim(n) => match n {
            NdsimCmd::Is(a) => {
                let (d, s, t) = Counted::load(&a.file, a.sldag)?.layered(a.s, a.t)?;
                let stats = run_all_paths(&nonreach_nd(&d, s, t, None)?, budget)?;
                let levels = inductive_layer_counts(&d, s, budget)?;
                Report::new("ndsim is", if stats.acc.is_zero() { "reachable" } else { "unreachable" })
                    .count("acc", &stats.acc)
                    .count("rej", &stats.rej)
                    .witness(join(&levels))
            }
            NdsimCmd::Ul { file, s, t } => {
                let rep = ul_reach(&load_graph(&file)?, s, t, budget)?;
                Report::new("ndsim ul", if rep.reachable { "reachable" } else { "unreachable" })
                    .count("predicate_calls", rep.predicate_calls)
                    .count("expanded_vertices", rep.expanded_vertices)
                    .count("unambiguous", rep.unambiguous)
            }
            NdsimCmd::Sharplcfl { st, k } => {
                let (d, s, t) = Counted::load(&st.file, st.sldag)?.layered(st.s, st.t)?;
                let f = d.path_count(s, t)?;
                let stats = run_all_paths(&sharplcfl(&d, s, t, k)?, budget)?;
                Report::new("ndsim sharplcfl", &stats.acc)
                    .count("acc", &stats.acc)
                    .count("rej", &stats.rej)
                    .count("paths", f)
                    .count("k", k)
            }
        },
        Command::Decide(d) => {
            let (name, a) = match &d {
                DecideCmd::Mod(a) => return decide_mod("decide mod", a, 2),
                DecideCmd::Modl(a) => return decide_mod("decide modl", a, 1),
                DecideCmd::Exact(a) => ("decide exact", a),
                DecideCmd::Gap(a) => ("decide gap", a),
                DecideCmd::Prob(a) => ("decide prob", a),
            };
            let inst = Counted::load(&a.file, a.sldag)?;
            let f1 = BigInt::from(inst.count(a.s1, a.t1)?);
            let f2 = BigInt::from(inst.count(a.s2, a.t2)?);
            let gap = &f1 - &f2;
            let result = match d {
                DecideCmd::Exact(_) => yes_no(gap.is_zero()).to_string(),
                DecideCmd::Prob(_) => yes_no(gap.is_positive()).to_string(),
                _ => gap.to_string(),
            };
            Report::new(name, result).count("f1", f1).count("f2", f2)
        }
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded(_) | Error::Internal(_) => 4,
        _ => 3,
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let json = cli.json;
    let (text, code) = match dispatch(cli.command) {
        Ok(rep) if json => (serde_json::to_string(&rep).expect("report serializes") + "\n", 0),
        Ok(rep) => (rep.to_text(), 0),
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    if out.write_all(text.as_bytes()).is_err() {
        return 2;
    }
    code
}
