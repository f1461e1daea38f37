//! The `crossflip` command-line tool.
//!
//! Exit status is 0 on success, 1 on a domain error (with a JSON error record
//! on standard error) and 2 on a usage error. Randomized commands default to
//! seed 0.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coloring::{
    extend_coloring, find_proper_coloring, is_balanced_coloring, is_proper, Coloring, RelativeComplex,
};
use crate::core::classify::{classify, Classification};
use crate::core::generate::{self, Kind};
use crate::core::{Complex, Face, LabelGen, VertexId};
use crate::error::{Error, Result};
use crate::flips::{
    available_bistellar_flips, available_cross_flips, enumerate_cross_flip_templates, CatalogMode, CrossFlipTemplate,
    FlipMove,
};
use crate::io::{self, ComplexFile};
use crate::pipeline::random::{random_balanced_sphere, random_sphere};
use crate::pipeline::{
    bistellar_reduce, colored_connect, connect_balanced, heuristic_reduce, reduce_balanced_2sphere, AnnealConfig, Move,
    Objective, ReductionReport,
};
use crate::poset::{
    compose, decompose, elementary_cobordism, eliminate_face, eliminate_vertices, find_bidirectional_shelling,
    subdivide_cobordism, verify_bidirectional, PseudoCobordism,
};
use crate::shelling::DEFAULT_SHELLING_BUDGET;

/// Seed used by randomized commands when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Parser, Debug)]
#[command(name = "crossflip", version, about = "Balanced triangulations, flips and cross-flips")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Search budget: annealing moves, or shelling search nodes.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Suppress summaries on standard output.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Output file; standard output by default.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a standard complex.
    Gen(GenArgs),
    /// Classify a complex and check a coloring.
    Check {
        input: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
    },
    /// Find a proper coloring, or extend one from a subcomplex.
    Color(ColorArgs),
    /// List available bistellar flips, or cross-flips from a catalog.
    Flips {
        input: PathBuf,
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Apply a bistellar flip or a move file.
    Apply(ApplyArgs),
    /// Enumerate cross-flip templates.
    Catalog {
        #[arg(short)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Mode::General)]
        mode: Mode,
    },
    /// Reduce a complex towards a standard sphere.
    Reduce(ReduceArgs),
    /// Connect two complexes by flips.
    Connect(ConnectArgs),
    /// Pseudo-cobordism tools.
    #[command(subcommand)]
    Cobordism(CobordismCommand),
    /// Rewrite a complex (and coloring) canonically.
    Fmt {
        input: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Basic,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Simplex,
    SimplexBoundary,
    CrossPolytope,
    Bipyramid,
    Torus,
    Barycentric,
    RandomSphere,
    RandomBalanced,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub kind: GenKind,
    /// Dimension.
    #[arg(short, default_value_t = 2)]
    pub d: usize,
    /// Size parameter: bipyramid half-polygon, torus grid, sphere vertices or cross-flip count.
    #[arg(short, default_value_t = 3)]
    pub n: usize,
    /// Input complex for `barycentric`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Where to write the coloring; defaults to `<output>.col` when `-o` is given.
    #[arg(long)]
    pub colors: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ColorArgs {
    pub input: PathBuf,
    /// Palette size.
    #[arg(short)]
    pub m: usize,
    /// Subcomplex whose coloring is extended.
    #[arg(long, requires = "coloring")]
    pub fixed: Option<PathBuf>,
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    /// Where to write the coloring of an extension.
    #[arg(long)]
    pub colors: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    pub input: PathBuf,
    /// Face removed by a bistellar flip, labels separated by commas or spaces.
    #[arg(long, requires = "b", conflicts_with = "move_file")]
    pub a: Option<String>,
    /// Face inserted by a bistellar flip.
    #[arg(long, requires = "a")]
    pub b: Option<String>,
    /// A move in JSON.
    #[arg(long = "move", required_unless_present = "a")]
    pub move_file: Option<PathBuf>,
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    /// Where to write the transported coloring.
    #[arg(long)]
    pub colors: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Constructive cross-flip reduction of a balanced 2-sphere.
    Balanced,
    /// Annealing over a cross-flip catalog.
    Heuristic,
    /// Annealing over bistellar flips.
    Bistellar,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Balanced)]
    pub method: Method,
    /// Shorthand for `--method balanced`.
    #[arg(long, conflicts_with = "method")]
    pub balanced: bool,
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    /// Catalog for the heuristic method; the general catalog by default.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Facets)]
    pub objective: ObjectiveArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Facets,
    Vertices,
}

#[derive(Args, Debug)]
pub struct ConnectArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long)]
    pub first_coloring: Option<PathBuf>,
    #[arg(long)]
    pub second_coloring: Option<PathBuf>,
    /// Palette size for a color-preserving bistellar connection of 2-spheres;
    /// without it, balanced surfaces are connected by cross-flips.
    #[arg(short)]
    pub m: Option<usize>,
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CobordismCommand {
    /// Check the axioms and find a bidirectional shelling.
    Verify { input: PathBuf },
    /// The elementary cobordism of a bistellar flip.
    Elementary {
        input: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Glue two cobordisms along the right end of the first.
    Compose { first: PathBuf, second: PathBuf },
    /// Read off the bistellar flips of a shellable cobordism.
    Decompose { input: PathBuf },
    /// Eliminate a face, or every vertex with `--all-vertices`.
    Eliminate {
        input: PathBuf,
        #[arg(long, required_unless_present = "all_vertices")]
        face: Option<String>,
        /// Ball replacing the star; a cone over the link by default.
        #[arg(long, conflicts_with = "all_vertices")]
        ball: Option<PathBuf>,
        #[arg(long)]
        all_vertices: bool,
    },
    /// Stellarly subdivide a cobordism at one element.
    Subdivide {
        input: PathBuf,
        #[arg(long)]
        element: usize,
        #[arg(long)]
        apex: String,
    },
}

/// Parses `argv` and runs the command, writing to `out` and `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", serde_json::json!({ "error": e.record() }));
            1
        }
    }
}

struct Ctx<'a> {
    g: &'a Global,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn seed(&self) -> u64 {
        self.g.seed.unwrap_or(DEFAULT_SEED)
    }

    fn shelling_budget(&self) -> u64 {
        self.g.budget.unwrap_or(DEFAULT_SHELLING_BUDGET)
    }

    fn write_to(&mut self, path: Option<&Path>, content: &str) -> Result<()> {
        match path {
            Some(p) => fs::write(p, content)?,
            None => self.out.write_all(content.as_bytes())?,
        }
        Ok(())
    }

    /// The primary output, in the chosen format, to `-o` or standard output.
    fn emit<T: Serialize>(&mut self, text: impl FnOnce() -> String, value: &T) -> Result<()> {
        let content = match self.g.format {
            Format::Text => text(),
            Format::Structured => io::to_json(value),
        };
        let path = self.g.output.clone();
        self.write_to(path.as_deref(), &content)
    }

    fn summary(&mut self, text: &str) -> Result<()> {
        if !self.g.quiet {
            self.out.write_all(text.as_bytes())?;
        }
        Ok(())
    }

    /// Writes a JSON document to `-o`; without one, prints it in structured
    /// mode and `text` otherwise.
    fn emit_document<T: Serialize>(&mut self, value: &T, text: &str) -> Result<()> {
        let json = io::to_json(value);
        match (&self.g.output, self.g.format) {
            (Some(p), _) => {
                fs::write(p, json)?;
                self.summary(text)
            }
            (None, Format::Structured) => self.write_to(None, &json),
            (None, Format::Text) => self.summary(text),
        }
    }

    fn emit_report(&mut self, mut report: ReductionReport) -> Result<()> {
        report.stats.seed = Some(self.seed());
        let text = format!(
            "outcome: {}\nsteps: {}\nstart: {} ({} facets)\nend: {} ({} facets)\nseed: {}\n",
            serde_json::to_value(report.stats.outcome)?.as_str().unwrap_or_default(),
            report.moves.len(),
            report.start_key,
            report.start.num_facets(),
            report.end_key,
            report.end.num_facets(),
            self.seed(),
        );
        self.emit_document(&report, &text)
    }

    /// A complex with its optional coloring; in text mode the coloring goes
    /// to `colors`.
    fn emit_complex(
        &mut self,
        c: &Complex,
        k: Option<&Coloring>,
        colors: Option<&Path>,
        name: Option<&str>,
    ) -> Result<()> {
        if self.g.format == Format::Text {
            if let (Some(k), Some(p)) = (k, colors) {
                fs::write(p, io::serialize_coloring(k))?;
            }
        }
        let file = ComplexFile { facets: c.clone(), colors: k.cloned(), name: name.map(str::to_string) };
        self.emit(|| io::serialize_complex(c), &file)
    }
}

fn parse_face(s: &str) -> Result<Face> {
    let labels = s.split([',', ' ']).filter(|t| !t.is_empty()).map(VertexId::parse).collect::<Result<Vec<_>>>()?;
    Face::new(labels)
}

fn read_complex_and_coloring(path: &Path, coloring: Option<&PathBuf>) -> Result<(Complex, Option<Coloring>)> {
    let file = io::read_complex(path)?;
    let k = match coloring {
        Some(p) => Some(io::read_coloring(p)?),
        None => file.colors,
    };
    Ok((file.facets, k))
}

fn load_catalog(path: Option<&PathBuf>, d: usize, budget: u64) -> Result<Vec<CrossFlipTemplate>> {
    match path {
        Some(p) => io::read_json(p),
        None => enumerate_cross_flip_templates(d, CatalogMode::General, budget),
    }
}

fn complex_dim(c: &Complex) -> Result<usize> {
    c.dim()
        .filter(|&d| d >= 1)
        .map(|d| d as usize)
        .ok_or_else(|| Error::Precondition("the complex has dimension below 1".into()))
}

#[derive(Serialize)]
struct CheckReport {
    #[serde(flatten)]
    classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    proper: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    balanced: Option<bool>,
}

impl CheckReport {
    fn text(&self) -> String {
        let c = &self.classification;
        let opt = |b: Option<bool>| b.map_or("n/a".to_string(), |b| b.to_string());
        let mut s = String::new();
        s += &format!("dim: {}\n", c.dim.map_or("void".to_string(), |d| d.to_string()));
        s += &format!("f_vector: {:?}\n", c.f_vector.0);
        s += &format!("euler_characteristic: {}\n", c.euler_characteristic);
        s += &format!("pure: {}\nconnected: {}\n", c.pure, c.connected);
        s += &format!("closed_pseudomanifold: {}\n", c.closed_pseudomanifold);
        s += &format!("surface: {}\n", opt(c.surface));
        s += &format!("vertex_links_spheres: {}\n", opt(c.vertex_links_spheres));
        s += &format!("orientable: {}\n", opt(c.orientable));
        s += &format!(
            "sphere: {}\n",
            serde_json::to_value(c.sphere).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
        );
        if let Some(p) = self.proper {
            s += &format!("proper: {p}\n");
        }
        if let Some(b) = self.balanced {
            s += &format!("balanced: {b}\n");
        }
        s
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let mut ctx = Ctx { g: &cli.global, out };
    match &cli.command {
        Command::Gen(a) => gen(&mut ctx, a),
        Command::Check { input, coloring } => {
            let (c, k) = read_complex_and_coloring(input, coloring.as_ref())?;
            let report = CheckReport {
                classification: classify(&c),
                proper: k.as_ref().map(|k| is_proper(&c, k)).transpose()?,
                balanced: k.as_ref().map(|k| is_balanced_coloring(&c, k)).transpose()?,
            };
            ctx.emit(|| report.text(), &report)
        }
        Command::Color(a) => color(&mut ctx, a),
        Command::Flips { input, catalog, limit } => {
            let c = io::read_complex(input)?.facets;
            match catalog {
                None => {
                    let flips = available_bistellar_flips(&c);
                    ctx.emit(|| flips.iter().map(|f| format!("{} -> {}\n", f.a, f.b)).collect(), &flips)
                }
                Some(p) => {
                    let templates: Vec<CrossFlipTemplate> = io::read_json(p)?;
                    let moves: Vec<Move> = available_cross_flips(&c, &templates, *limit)
                        .into_iter()
                        .map(|mv| Move::Cross { mv })
                        .collect();
                    let text = || {
                        moves
                            .iter()
                            .map(|m| match m {
                                Move::Cross { mv } => {
                                    let (a, b) = mv.template.shape();
                                    format!(
                                        "({a},{b}) {} {}\n",
                                        mv.template.key,
                                        mv.image().facets().map(Face::to_string).collect::<Vec<_>>().join(" ")
                                    )
                                }
                                Move::Bistellar { .. } => unreachable!(),
                            })
                            .collect()
                    };
                    ctx.emit(text, &moves)
                }
            }
        }
        Command::Apply(a) => {
            let (c, k) = read_complex_and_coloring(&a.input, a.coloring.as_ref())?;
            let mv = match (&a.a, &a.b, &a.move_file) {
                (Some(fa), Some(fb), _) => Move::bistellar(FlipMove::new(parse_face(fa)?, parse_face(fb)?)),
                (_, _, Some(p)) => io::read_json(p)?,
                _ => return Err(Error::InvalidParameter("give --a and --b, or --move".into())),
            };
            let (nc, nk) = mv.apply(&c, k.as_ref())?;
            ctx.emit_complex(&nc, nk.as_ref(), a.colors.as_deref(), None)
        }
        Command::Catalog { d, mode } => {
            let mode = match mode {
                Mode::Basic => CatalogMode::Basic,
                Mode::General => CatalogMode::General,
            };
            let templates = enumerate_cross_flip_templates(*d, mode, ctx.shelling_budget())?;
            let text = templates
                .iter()
                .map(|t| {
                    let (a, b) = t.shape();
                    format!("({a},{b}) {:?} {}\n", t.origin, t.key)
                })
                .collect::<String>();
            ctx.emit_document(&templates, &text)
        }
        Command::Reduce(a) => reduce(&mut ctx, a),
        Command::Connect(a) => connect(&mut ctx, a),
        Command::Cobordism(c) => cobordism(&mut ctx, c),
        Command::Fmt { input, coloring } => {
            let file = io::read_complex(input)?;
            let k = match coloring {
                Some(p) => Some(io::read_coloring(p)?),
                None => file.colors.clone(),
            };
            match (ctx.g.format, coloring) {
                (Format::Text, Some(_)) => {
                    let k = k.expect("read above");
                    ctx.emit(|| io::serialize_coloring(&k), &())
                }
                _ => {
                    let out = ComplexFile { colors: k, ..file };
                    ctx.emit(|| io::serialize_complex(&out.facets), &out)
                }
            }
        }
    }
}

fn gen(ctx: &mut Ctx, a: &GenArgs) -> Result<()> {
    let seed = ctx.seed();
    let (c, k, name) = match a.kind {
        GenKind::Simplex => (generate::simplex(a.d)?, None, format!("simplex {}", a.d)),
        GenKind::SimplexBoundary => {
            (generate::simplex_boundary(a.d + 1)?, None, format!("boundary of simplex {}", a.d + 1))
        }
        GenKind::CrossPolytope => {
            let (c, k) = generate::cross_polytope_boundary(a.d)?;
            (c, Some(k), format!("cross-polytope {}", a.d))
        }
        GenKind::Bipyramid => {
            let (c, k) = generate::bipyramid(a.n)?;
            (c, Some(k), format!("bipyramid {}", a.n))
        }
        GenKind::Torus => {
            let (c, k) = generate::generate(&Kind::GridTorus(a.n, a.n))?;
            (c, k, format!("torus {0}x{0}", a.n))
        }
        GenKind::Barycentric => {
            let input = a.input.as_ref().ok_or_else(|| Error::InvalidParameter("barycentric needs --input".into()))?;
            let (c, k) = generate::barycentric_subdivision(&io::read_complex(input)?.facets)?;
            (c, Some(k), "barycentric subdivision".to_string())
        }
        GenKind::RandomSphere => (random_sphere(a.n, seed)?, None, format!("random sphere {} seed {seed}", a.n)),
        GenKind::RandomBalanced => {
            let catalog = enumerate_cross_flip_templates(2, CatalogMode::Basic, ctx.shelling_budget())?;
            let (c, k) = random_balanced_sphere(a.n, &catalog, seed)?;
            (c, Some(k), format!("random balanced sphere {} seed {seed}", a.n))
        }
    };
    let colors = a.colors.clone().or_else(|| {
        ctx.g.output.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".col");
            PathBuf::from(s)
        })
    });
    ctx.emit_complex(&c, k.as_ref(), colors.as_deref(), Some(&name))
}

fn color(ctx: &mut Ctx, a: &ColorArgs) -> Result<()> {
    let c = io::read_complex(&a.input)?.facets;
    match (&a.fixed, &a.coloring) {
        (Some(fixed), Some(kp)) => {
            let k = io::read_complex(fixed)?.facets;
            let kappa = io::read_coloring(kp)?;
            let ext = extend_coloring(&RelativeComplex::new(c, k)?, &kappa, a.m)?;
            if ctx.g.format == Format::Text {
                if let Some(p) = &a.colors {
                    fs::write(p, io::serialize_coloring(&ext.coloring))?;
                }
            }
            ctx.emit(|| io::serialize_complex(&ext.complex), &ext)
        }
        _ => {
            let k = find_proper_coloring(&c, a.m)
                .ok_or_else(|| Error::Precondition(format!("no proper coloring with {} colors", a.m)))?;
            ctx.emit(|| io::serialize_coloring(&k), &k)
        }
    }
}

fn anneal_config(ctx: &Ctx, objective: Objective) -> AnnealConfig {
    let mut cfg = AnnealConfig { seed: ctx.seed(), objective, ..AnnealConfig::default() };
    if let Some(b) = ctx.g.budget {
        cfg.budget = b as usize;
    }
    cfg
}

fn reduce(ctx: &mut Ctx, a: &ReduceArgs) -> Result<()> {
    let (c, k) = read_complex_and_coloring(&a.input, a.coloring.as_ref())?;
    let method = if a.balanced { Method::Balanced } else { a.method };
    let objective = match a.objective {
        ObjectiveArg::Facets => Objective::Facets,
        ObjectiveArg::Vertices => Objective::Vertices,
    };
    let cfg = anneal_config(ctx, objective);
    let report = match method {
        Method::Balanced => {
            let k = match k {
                Some(k) => k,
                None => find_proper_coloring(&c, 3)
                    .ok_or_else(|| Error::Precondition("the complex is not balanced".into()))?,
            };
            reduce_balanced_2sphere(&c, &k)?
        }
        Method::Heuristic => {
            let catalog = load_catalog(a.catalog.as_ref(), complex_dim(&c)?, ctx.shelling_budget())?;
            heuristic_reduce(&c, k.as_ref(), &catalog, &cfg)?
        }
        Method::Bistellar => bistellar_reduce(&c, &cfg)?,
    };
    ctx.emit_report(report)
}

fn connect(ctx: &mut Ctx, a: &ConnectArgs) -> Result<()> {
    let (c1, k1) = read_complex_and_coloring(&a.first, a.first_coloring.as_ref())?;
    let (c2, k2) = read_complex_and_coloring(&a.second, a.second_coloring.as_ref())?;
    let report = match a.m {
        Some(m) => {
            let k1 = k1.ok_or_else(|| Error::Uncolored("first complex has no coloring".into()))?;
            let k2 = k2.ok_or_else(|| Error::Uncolored("second complex has no coloring".into()))?;
            colored_connect(&c1, &k1, &c2, &k2, m)?
        }
        None => {
            let catalog = load_catalog(a.catalog.as_ref(), 2, ctx.shelling_budget())?;
            connect_balanced(&c1, k1.as_ref(), &c2, k2.as_ref(), &catalog, &anneal_config(ctx, Objective::Facets))?
        }
    };
    ctx.emit_report(report)
}

fn cobordism_summary(cob: &PseudoCobordism) -> Result<String> {
    Ok(format!(
        "elements: {}\ntop cells: {}\nleft: {} facets\nright: {} facets\n",
        cob.omega.len(),
        cob.top_cells().len(),
        cob.left_complex()?.num_facets(),
        cob.right_complex()?.num_facets()
    ))
}

#[derive(Serialize)]
struct VerifyReport {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    shelling: Option<Vec<usize>>,
}

fn cobordism(ctx: &mut Ctx, cmd: &CobordismCommand) -> Result<()> {
    let budget = ctx.shelling_budget();
    match cmd {
        CobordismCommand::Verify { input } => {
            let cob: PseudoCobordism = io::read_json(input)?;
            cob.verify()?;
            let bs = match &cob.witness {
                Some(w) => verify_bidirectional(&cob, w)?,
                None => None,
            };
            let bs = match bs {
                Some(bs) => Some(bs),
                None => find_bidirectional_shelling(&cob, budget)?,
            };
            let report = VerifyReport { valid: true, shelling: bs.map(|b| b.order) };
            let text = format!(
                "{}shelling: {}\n",
                cobordism_summary(&cob)?,
                report.shelling.as_ref().map_or("none found".to_string(), |o| format!("{o:?}"))
            );
            ctx.emit(|| text, &report)
        }
        CobordismCommand::Elementary { input, a, b } => {
            let c = io::read_complex(input)?.facets;
            let cob = elementary_cobordism(&c, &FlipMove::new(parse_face(a)?, parse_face(b)?))?;
            let text = cobordism_summary(&cob)?;
            ctx.emit_document(&cob, &text)
        }
        CobordismCommand::Compose { first, second } => {
            let c1: PseudoCobordism = io::read_json(first)?;
            let c2: PseudoCobordism = io::read_json(second)?;
            let cob = compose(&c1, &c2)?;
            let text = cobordism_summary(&cob)?;
            ctx.emit_document(&cob, &text)
        }
        CobordismCommand::Decompose { input } => {
            let cob: PseudoCobordism = io::read_json(input)?;
            cob.verify()?;
            let bs = match &cob.witness {
                Some(w) => verify_bidirectional(&cob, w)?,
                None => None,
            };
            let bs = match bs {
                Some(bs) => bs,
                None => find_bidirectional_shelling(&cob, budget)?
                    .ok_or_else(|| Error::Precondition("no bidirectional shelling found".into()))?,
            };
            let dec = decompose(&cob, &bs)?;
            let text: String = dec.steps.iter().map(|s| format!("{} -> {}\n", s.flip.a, s.flip.b)).collect();
            ctx.emit(|| text, &dec)
        }
        CobordismCommand::Eliminate { input, face, ball, all_vertices } => {
            let c = io::read_complex(input)?.facets;
            let mut labels = LabelGen::avoiding(c.vertices().iter());
            if *all_vertices {
                let (_, cob) = eliminate_vertices(&c, &mut labels)?;
                let text = cobordism_summary(&cob)?;
                return ctx.emit_document(&cob, &text);
            }
            let tau = parse_face(face.as_deref().expect("required by clap"))?;
            let ball = ball.as_ref().map(|p| io::read_complex(p).map(|f| f.facets)).transpose()?;
            if let Some(k) = &ball {
                labels.skip_past(k.vertices().iter());
            }
            let el = eliminate_face(&c, &tau, ball.as_ref(), &mut labels)?;
            let text = cobordism_summary(&el.cobordism)?;
            ctx.emit_document(&el, &text)
        }
        CobordismCommand::Subdivide { input, element, apex } => {
            let cob: PseudoCobordism = io::read_json(input)?;
            let out = subdivide_cobordism(&cob, *element, &VertexId::parse(apex)?, budget)?;
            let text = cobordism_summary(&out)?;
            ctx.emit_document(&out, &text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("crossflip").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["catalog", "-d", "2", "--bogus"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn domain_errors_exit_with_one_and_a_record() {
        let (code, _, err) = run_str(&["check", "/nonexistent/file"]);
        assert_eq!(code, 1);
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "io");
    }

    #[test]
    fn gen_cross_polytope_prints_the_octahedron() {
        let (code, out, _) = run_str(&["gen", "cross-polytope", "-d", "2"]);
        assert_eq!(code, 0);
        let c = io::parse_complex(&out).unwrap();
        assert_eq!(c, generate::cross_polytope_boundary(2).unwrap().0);
    }

    #[test]
    fn faces_parse_with_commas_or_spaces() {
        assert_eq!(parse_face("a,b c").unwrap(), Face::new(["a", "b", "c"]).unwrap());
        assert!(parse_face("a,a").is_err());
    }
}
