//! Command-line front end: enumeration, homology, table verification,
//! stacking products and column checks.

pub mod cache;
pub mod fixtures;
pub mod groups;

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use slitkit::classes::{class_order, is_cocycle, stack_product, CohomologyBasis};
use slitkit::complex::{enumerate_with_budget, DEFAULT_BUDGET};
use slitkit::homology::{all_columns, check_orientation};
use slitkit::{
    Cell, CellSet, Cochain, Coefficients, Error, GradedMatrixComplex, HomologyGroup, HomologyTable,
    ModuliIndex,
};

use cache::{Cache, Entry};
use fixtures::FixtureTable;
use groups::{isomorphic, mod_p_dimensions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "slitkit", version, about = "Homology of moduli spaces of surfaces with one or more boundary curves")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Largest h that may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct IndexArgs {
    /// Genus.
    #[arg(long)]
    g: usize,
    /// Boundary curves.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Punctures.
    #[arg(long, default_value_t = 0)]
    m: usize,
}

impl IndexArgs {
    fn index(&self) -> slitkit::Result<ModuliIndex> {
        ModuliIndex::new(self.g, self.n, self.m)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Suite {
    /// The built-in homology tables.
    #[value(alias = "paper-tables")]
    Tables,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the non-degenerate cells.
    Enumerate {
        #[command(flatten)]
        index: IndexArgs,
        /// Also write the cells to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homology groups H_k for k = 0..3h.
    Homology {
        #[command(flatten)]
        index: IndexArgs,
        /// z, f2 or f<p>.
        #[arg(long, default_value = "z", value_parser = parse_coefficients)]
        coeff: Coefficients,
    },
    /// Check the built-in tables.
    Verify {
        #[arg(long, value_enum, default_value = "tables")]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        max_h: usize,
    },
    /// Stacking product of two cochains given as JSON files.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, default_value = "z", value_parser = parse_coefficients)]
        coeff: Coefficients,
        /// Also compute the class of the product.
        #[arg(long)]
        class: bool,
    },
    /// Column complexes of one boundary curve and their concentration.
    Columns {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
    },
    /// Cocycle representatives: cohomology generators of one degree, or the
    /// dual of a single cell.
    Generators {
        #[command(flatten)]
        index: IndexArgs,
        #[arg(long, default_value = "z", value_parser = parse_coefficients)]
        coeff: Coefficients,
        #[arg(long, required_unless_present = "cell")]
        degree: Option<usize>,
        /// A cell in the cache notation, e.g. "2;3;(0,2,1,3)|(0,2,3)(1)|(0,1,2,3)".
        #[arg(long)]
        cell: Option<String>,
    },
}

fn parse_coefficients(s: &str) -> Result<Coefficients, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Error(Error),
    /// The message has already been written.
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.into())
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Consistency(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

/// Runs one command line and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(k) = cli.threads {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    let mut ctx = Context {
        out,
        err,
        cache: Cache::from_env(),
        json: cli.json,
        budget: cli.budget,
    };
    match ctx.dispatch(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Mismatch) => EXIT_MISMATCH,
        Err(Failure::Error(e)) => {
            let _ = writeln!(ctx.err, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Context<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    cache: Cache,
    json: bool,
    budget: usize,
}

#[derive(Serialize)]
struct BidegreeCount {
    q: usize,
    widths: Vec<usize>,
    count: usize,
}

#[derive(Serialize)]
struct EnumerateJson {
    g: usize,
    n: usize,
    m: usize,
    h: usize,
    cells: usize,
    per_degree: Vec<usize>,
    per_bidegree: Vec<BidegreeCount>,
}

#[derive(Serialize)]
struct ColumnJson {
    widths: Vec<usize>,
    cells_per_q: Vec<usize>,
    cohomology: Vec<String>,
    concentrated: bool,
}

#[derive(Serialize)]
struct FixtureJson {
    tag: &'static str,
    g: usize,
    n: usize,
    m: usize,
    h: usize,
    ring: String,
    status: &'static str,
    check: &'static str,
    expected: Vec<String>,
    computed: Vec<String>,
}

impl Context<'_> {
    fn dispatch(&mut self, command: &Command) -> Result<(), Failure> {
        match command {
            Command::Enumerate { index, out } => self.enumerate(index.index()?, out.as_ref()),
            Command::Homology { index, coeff } => self.homology(index.index()?, *coeff),
            Command::Verify { suite: Suite::Tables, max_h } => self.verify(*max_h),
            Command::Product {
                left,
                right,
                coeff,
                class,
            } => self.product(left, right, *coeff, *class),
            Command::Columns { g, m } => self.columns(ModuliIndex::new(*g, 1, *m)?),
            Command::Generators {
                index,
                coeff,
                degree,
                cell,
            } => self.generators(index.index()?, *coeff, *degree, cell.as_deref()),
        }
    }

    /// Cells from the cache, or freshly enumerated together with the entry
    /// that would store them.
    fn cells(&self, ix: &ModuliIndex) -> slitkit::Result<(CellSet, Option<Entry>)> {
        if let Some(cells) = self.cache.cells(ix) {
            return Ok((cells, None));
        }
        let cells = enumerate_with_budget(ix, self.budget)?;
        let entry = Entry::cells(&cells)?;
        Ok((cells, Some(entry)))
    }

    fn complex(&self, ix: &ModuliIndex) -> slitkit::Result<GradedMatrixComplex> {
        let (cells, entry) = self.cells(ix)?;
        if let Some(e) = entry {
            self.cache.store(&e)?;
        }
        GradedMatrixComplex::from_cells(cells)
    }

    fn enumerate(&mut self, ix: ModuliIndex, file: Option<&PathBuf>) -> Result<(), Failure> {
        let (cells, entry) = self.cells(&ix)?;
        if let Some(e) = entry {
            self.cache.store(&e)?;
        }
        if let Some(path) = file {
            let f = std::fs::File::create(path)?;
            let mut w = std::io::BufWriter::new(f);
            cells.write_cache(&mut w)?;
            w.flush()?;
        }
        let per_degree = cells.counts_per_degree();
        if self.json {
            let j = EnumerateJson {
                g: ix.g,
                n: ix.n,
                m: ix.m,
                h: ix.h(),
                cells: cells.len(),
                per_degree,
                per_bidegree: cells
                    .bidegree_counts()
                    .into_iter()
                    .map(|(b, count)| BidegreeCount {
                        q: b.q,
                        widths: b.widths,
                        count,
                    })
                    .collect(),
            };
            writeln!(self.out, "{}", serde_json::to_string(&j).map_err(Error::from)?)?;
        } else {
            writeln!(self.out, "{ix}, h = {}: {} non-degenerate cells", ix.h(), cells.len())?;
            for (d, c) in per_degree.iter().enumerate().filter(|(_, c)| **c > 0) {
                writeln!(self.out, "  degree {d:>2}: {c}")?;
            }
        }
        Ok(())
    }

    /// The table as JSON, from the cache if possible.
    fn table_json(&self, ix: &ModuliIndex, co: Coefficients) -> slitkit::Result<(String, Vec<Entry>)> {
        check_orientation(ix, co)?;
        if let Some(json) = self.cache.table(ix, co) {
            return Ok((json, Vec::new()));
        }
        let (cells, entry) = self.cells(ix)?;
        let table = slitkit::homology_from_cells(cells, co)?;
        let json = table.to_json()?;
        let mut entries: Vec<Entry> = entry.into_iter().collect();
        entries.push(Entry::Table {
            index: *ix,
            coefficients: co,
            json: json.clone(),
        });
        Ok((json, entries))
    }

    fn homology(&mut self, ix: ModuliIndex, co: Coefficients) -> Result<(), Failure> {
        let (json, entries) = self.table_json(&ix, co)?;
        self.cache.store_all(&entries)?;
        if self.json {
            writeln!(self.out, "{json}")?;
        } else {
            let table = HomologyTable::from_json(&json)?;
            write!(self.out, "{}", human_table(&table))?;
        }
        Ok(())
    }

    fn verify(&mut self, max_h: usize) -> Result<(), Failure> {
        let mut pending: Vec<Entry> = Vec::new();
        let mut tables: HashMap<(ModuliIndex, Coefficients), HomologyTable> = HashMap::new();
        let mut reports = Vec::new();
        let mut failed = 0;
        let all = fixtures::all();
        if let Some(h) = all.iter().map(FixtureTable::h).filter(|&h| h <= max_h).max() {
            if h > self.budget {
                return Err(Error::BudgetExceeded { h, budget: self.budget }.into());
            }
        }
        for fixture in all {
            if fixture.h() > max_h {
                reports.push(report(&fixture, "skipped", "", None));
                continue;
            }
            // integral tables with m >= 2 have twisted coefficients; check
            // their mod-2 reduction instead
            let twisted = fixture.ring == Coefficients::Integers && fixture.index.m >= 2;
            let ring = if twisted { Coefficients::F2 } else { fixture.ring };
            let key = (fixture.index, ring);
            if !tables.contains_key(&key) {
                let (json, entries) = self.table_json(&fixture.index, ring)?;
                // the cell set is stored once even if two rings need it
                for e in entries {
                    let seen = |ix: &ModuliIndex| {
                        pending
                            .iter()
                            .any(|p| matches!(p, Entry::Cells { index, .. } if index == ix))
                    };
                    if !matches!(&e, Entry::Cells { index, .. } if seen(index)) {
                        pending.push(e);
                    }
                }
                tables.insert(key, HomologyTable::from_json(&json)?);
            }
            let computed = &tables[&key];
            let (ok, check) = if twisted {
                let predicted = mod_p_dimensions(&fixture.expected_padded(computed.groups.len()), 2);
                (predicted == pad(computed.betti(), predicted.len()), "mod 2 via universal coefficients")
            } else {
                (matches(&fixture, computed), "exact")
            };
            if !ok {
                failed += 1;
            }
            reports.push(report(&fixture, if ok { "pass" } else { "mismatch" }, check, Some(computed)));
        }
        if self.json {
            writeln!(self.out, "{}", serde_json::to_string(&reports).map_err(Error::from)?)?;
        } else {
            for r in &reports {
                writeln!(
                    self.out,
                    "{:<8} {:<9} g={} n={} m={} {:<3} {}",
                    r.status, r.tag, r.g, r.n, r.m, r.ring, r.check
                )?;
                if r.status == "mismatch" {
                    writeln!(self.out, "         expected {}", r.expected.join(", "))?;
                    writeln!(self.out, "         computed {}", r.computed.join(", "))?;
                }
            }
            let checked = reports.iter().filter(|r| r.status != "skipped").count();
            writeln!(
                self.out,
                "{checked} checked, {failed} mismatched, {} skipped (h > {max_h})",
                reports.len() - checked
            )?;
        }
        if failed > 0 {
            writeln!(self.err, "verification failed; cache left unchanged")?;
            return Err(Failure::Mismatch);
        }
        self.cache.store_all(&pending)?;
        Ok(())
    }

    fn product(&mut self, left: &PathBuf, right: &PathBuf, co: Coefficients, class: bool) -> Result<(), Failure> {
        let x = Cochain::from_json(std::fs::read_to_string(left)?.trim(), co)?;
        let y = Cochain::from_json(std::fs::read_to_string(right)?.trim(), co)?;
        let p = stack_product(&x, &y)?;
        let text = p.to_json()?;
        if !class {
            writeln!(self.out, "{text}")?;
            return Ok(());
        }
        let target = p.index();
        check_orientation(target, co)?;
        let complex = self.complex(target)?;
        let cocycle = is_cocycle(&p, &complex)?;
        let order = if cocycle {
            Some(class_order(&p, &complex)?.to_string())
        } else {
            None
        };
        if self.json {
            let order = order.map_or("null".to_string(), |o| format!("\"{o}\""));
            writeln!(self.out, "{{\"product\":{text},\"cocycle\":{cocycle},\"order\":{order}}}")?;
        } else {
            let what = match &order {
                Some(o) => format!("a cocycle of class order {o}"),
                None => "not a cocycle".to_string(),
            };
            writeln!(self.out, "product of degree {} in {target}: {what}", p.degree())?;
        }
        Ok(())
    }

    fn columns(&mut self, ix: ModuliIndex) -> Result<(), Failure> {
        let (cells, entry) = self.cells(&ix)?;
        if let Some(e) = entry {
            self.cache.store(&e)?;
        }
        let cols = all_columns(&cells)?;
        let spread = cols.iter().filter(|c| !c.concentrated).count();
        if self.json {
            let j: Vec<ColumnJson> = cols
                .iter()
                .map(|c| ColumnJson {
                    widths: c.widths.clone(),
                    cells_per_q: c.cells_per_q.clone(),
                    cohomology: c.cohomology.iter().map(ToString::to_string).collect(),
                    concentrated: c.concentrated,
                })
                .collect();
            writeln!(self.out, "{}", serde_json::to_string(&j).map_err(Error::from)?)?;
        } else {
            for c in &cols {
                let groups: Vec<String> = c.cohomology.iter().map(ToString::to_string).collect();
                writeln!(
                    self.out,
                    "{:?} cells {:?} H^q {} {}",
                    c.widths,
                    c.cells_per_q,
                    groups.join(" "),
                    if c.concentrated { "" } else { "NOT CONCENTRATED" }
                )?;
            }
            writeln!(self.out, "{} columns, {spread} not concentrated in q = {}", cols.len(), ix.h())?;
        }
        if spread > 0 {
            return Err(Failure::Mismatch);
        }
        Ok(())
    }

    fn generators(
        &mut self,
        ix: ModuliIndex,
        co: Coefficients,
        degree: Option<usize>,
        cell: Option<&str>,
    ) -> Result<(), Failure> {
        check_orientation(&ix, co)?;
        if let Some(text) = cell {
            let cell: Cell = text.parse()?;
            let x = Cochain::dual(ix, cell, co)?;
            writeln!(self.out, "{}", x.to_json()?)?;
            return Ok(());
        }
        let degree = degree.expect("clap enforces --degree or --cell");
        let complex = self.complex(&ix)?;
        let basis = CohomologyBasis::compute(&complex, degree, co)?;
        for g in basis.generators(&complex) {
            writeln!(self.out, "{}", g.to_json()?)?;
        }
        Ok(())
    }
}

fn pad(mut v: Vec<usize>, len: usize) -> Vec<usize> {
    v.resize(len.max(v.len()), 0);
    v
}

fn matches(fixture: &FixtureTable, computed: &HomologyTable) -> bool {
    let len = computed.groups.len();
    if fixture.expected.len() > len {
        return false;
    }
    let expected = fixture.expected_padded(len);
    expected.iter().zip(&computed.groups).all(|(e, c)| match fixture.ring {
        Coefficients::Integers => isomorphic(e, c),
        Coefficients::Prime(_) => e.betti == c.betti,
    })
}

fn show(groups: &[HomologyGroup], ring: Coefficients) -> Vec<String> {
    let top = groups.iter().rposition(|g| !g.is_zero()).map_or(0, |t| t + 1);
    groups[..top]
        .iter()
        .map(|g| match ring {
            Coefficients::Integers => g.to_string(),
            Coefficients::Prime(_) => g.betti.to_string(),
        })
        .collect()
}

fn report(
    f: &FixtureTable,
    status: &'static str,
    check: &'static str,
    computed: Option<&HomologyTable>,
) -> FixtureJson {
    FixtureJson {
        tag: f.tag,
        g: f.index.g,
        n: f.index.n,
        m: f.index.m,
        h: f.h(),
        ring: f.ring.tag(),
        status,
        check,
        expected: show(&f.expected, f.ring),
        computed: computed.map_or_else(Vec::new, |t| show(&t.groups, t.coefficients)),
    }
}

fn human_table(t: &HomologyTable) -> String {
    let ix = &t.index;
    let cells: usize = t.cells_per_degree.iter().sum();
    let mut s = String::new();
    let _ = writeln!(s, "H_*(M; {}) for {ix}, h = {}, {cells} cells", t.coefficients, ix.h());
    let top = t.top_nonzero().unwrap_or(0);
    for g in &t.groups[..=top.min(t.groups.len().saturating_sub(1))] {
        let group = match (t.coefficients, g.betti) {
            (Coefficients::Integers, _) => g.to_string(),
            (_, 0) => "0".to_string(),
            (co, 1) => co.tag(),
            (co, b) => format!("{co}^{b}"),
        };
        let _ = writeln!(s, "  H_{:<2} = {group}", g.degree);
    }
    let _ = writeln!(s, "  H_k  = 0 for k > {top}");
    s
}
