//! Command-line interface: spectra, convergence sweeps, Betti numbers,
//! decomposition reports, and exact reference spectra, with CSV (and SVG)
//! output.
//!
//! Every CSV starts with a `# config:` provenance line; identical
//! configurations and seeds produce bitwise-identical output. Exit codes:
//! 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};

use crate::decompose::{
    decompose, discrete_curl, discrete_div, grid_form_context, star_norm, DiscreteForm,
};
use crate::eigen::SpectrumResult;
use crate::error::Error;
use crate::exact::{ball_spectrum, box_spectrum, disk_spectrum, shell_spectrum, ExactBc};
use crate::grid::{build_grid, Aabb};
use crate::laplacian::{laplacian, LaplacianKind, LaplacianSystem};
use crate::sdf::{grid_for_shape, load_sdf, sample_sdf, ScalarField, Shape, ShapeKind};
use crate::simplicial::{clique_complex, read_edge_list, read_off, CellComplex, SimplicialComplex};
use crate::sparse::BoundaryCondition;

#[derive(Parser, Debug)]
#[command(name = "declap", about = "Laplacian spectra on implicit grid domains")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one Laplacian spectrum and emit eigenvalues as CSV
    Spectra(SpectraArgs),
    /// Solve the same system over several grid lengths; CSV plus SVG plot
    Convergence(ConvergenceArgs),
    /// Betti numbers of a grid domain, mesh, or graph clique complex
    Betti(BettiArgs),
    /// Hodge-decompose a discrete 1-form and report component norms
    Decompose(DecomposeArgs),
    /// Exact continuum spectrum of an elementary shape
    Exact(ExactArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ShapeName {
    Disk,
    Square,
    Ball,
    Cube,
    Torus,
    Shell,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridMode {
    /// Padded bounding-box grid around the shape
    Auto,
    /// The worked-example 3x3-cell unit grid with the shape at (1.5, 1.5)
    FigExample,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BcArg {
    Normal,
    Tangential,
}

impl From<BcArg> for BoundaryCondition {
    fn from(b: BcArg) -> Self {
        match b {
            BcArg::Normal => BoundaryCondition::Normal,
            BcArg::Tangential => BoundaryCondition::Tangential,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Big,
    Hodge,
    Combinatorial,
}

impl From<KindArg> for LaplacianKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Big => LaplacianKind::Big,
            KindArg::Hodge => LaplacianKind::Hodge,
            KindArg::Combinatorial => LaplacianKind::Combinatorial,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExactBcArg {
    Dirichlet,
    Neumann,
}

impl From<ExactBcArg> for ExactBc {
    fn from(b: ExactBcArg) -> Self {
        match b {
            ExactBcArg::Dirichlet => ExactBc::Dirichlet,
            ExactBcArg::Neumann => ExactBc::Neumann,
        }
    }
}

#[derive(Args, Debug)]
struct DomainArgs {
    /// Analytic shape of the domain
    #[arg(long, value_enum)]
    shape: Option<ShapeName>,
    /// Radius for disk and ball
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    /// Side length for square and cube
    #[arg(long, default_value_t = 2.0)]
    side: f64,
    /// Torus major radius
    #[arg(long, default_value_t = 1.0)]
    major: f64,
    /// Torus minor radius
    #[arg(long, default_value_t = 0.4)]
    minor: f64,
    /// Shell outer radius
    #[arg(long, default_value_t = 1.0)]
    outer: f64,
    /// Shell inner radius
    #[arg(long, default_value_t = 0.5)]
    inner: f64,
    /// Grid length
    #[arg(long, default_value_t = 0.1)]
    lg: f64,
    /// Grid construction mode
    #[arg(long, value_enum, default_value_t = GridMode::Auto)]
    grid: GridMode,
    /// Load the domain from an SDF file instead of an analytic shape
    #[arg(long, conflicts_with = "shape")]
    sdf: Option<PathBuf>,
}

impl DomainArgs {
    fn shape_kind(&self) -> Result<ShapeKind, Error> {
        let name = self.shape.ok_or_else(|| {
            Error::InvalidInput("either --shape or --sdf is required".into())
        })?;
        Ok(match name {
            ShapeName::Disk => ShapeKind::Disk {
                radius: self.radius,
            },
            ShapeName::Square => ShapeKind::Square { side: self.side },
            ShapeName::Ball => ShapeKind::Ball {
                radius: self.radius,
            },
            ShapeName::Cube => ShapeKind::Cube { side: self.side },
            ShapeName::Torus => ShapeKind::Torus {
                major: self.major,
                minor: self.minor,
            },
            ShapeName::Shell => ShapeKind::Shell {
                outer: self.outer,
                inner: self.inner,
            },
        })
    }

    fn build_field(&self) -> Result<ScalarField, Error> {
        if let Some(path) = &self.sdf {
            return load_sdf(path);
        }
        let kind = self.shape_kind()?;
        match self.grid {
            GridMode::Auto => {
                let shape = Shape::centered(kind)?;
                let grid = grid_for_shape(&shape, self.lg)?;
                Ok(sample_sdf(&shape, &grid))
            }
            GridMode::FigExample => {
                let dim = Shape::centered(kind)?.dim();
                let mut hi = [3.0; 3];
                let mut center = [1.5; 3];
                if dim == 2 {
                    hi[2] = 0.0;
                    center[2] = 0.0;
                }
                let grid = build_grid(Aabb::new([0.0; 3], hi), self.lg, dim)?;
                let shape = Shape::new(kind, center)?;
                Ok(sample_sdf(&shape, &grid))
            }
        }
    }

    /// Exact reference spectrum matching the scalar Laplacian of this
    /// domain under the given boundary condition, when one is known.
    fn exact_reference(&self, bc: BoundaryCondition, m: usize) -> Option<Vec<f64>> {
        let kind = self.shape_kind().ok()?;
        let ebc = match bc {
            BoundaryCondition::Normal => ExactBc::Dirichlet,
            BoundaryCondition::Tangential => ExactBc::Neumann,
        };
        match kind {
            ShapeKind::Disk { radius } => disk_spectrum(radius, ebc, m).ok(),
            ShapeKind::Square { side } => box_spectrum(&[side, side], ebc, m).ok(),
            ShapeKind::Ball { radius } => ball_spectrum(radius, ebc, m).ok(),
            ShapeKind::Cube { side } => box_spectrum(&[side, side, side], ebc, m).ok(),
            ShapeKind::Shell { outer, inner } => shell_spectrum(outer, inner, ebc, m).ok(),
            ShapeKind::Torus { .. } => None,
        }
    }

    fn describe(&self) -> String {
        if let Some(path) = &self.sdf {
            return format!("sdf={} lg={}", path.display(), fmt_f(self.lg));
        }
        let shape = match self.shape {
            Some(ShapeName::Disk) => format!("shape=disk R={}", fmt_f(self.radius)),
            Some(ShapeName::Square) => format!("shape=square side={}", fmt_f(self.side)),
            Some(ShapeName::Ball) => format!("shape=ball R={}", fmt_f(self.radius)),
            Some(ShapeName::Cube) => format!("shape=cube side={}", fmt_f(self.side)),
            Some(ShapeName::Torus) => format!(
                "shape=torus major={} minor={}",
                fmt_f(self.major),
                fmt_f(self.minor)
            ),
            Some(ShapeName::Shell) => format!(
                "shape=shell outer={} inner={}",
                fmt_f(self.outer),
                fmt_f(self.inner)
            ),
            None => "shape=?".into(),
        };
        let grid = match self.grid {
            GridMode::Auto => "auto",
            GridMode::FigExample => "fig-example",
        };
        format!("{shape} lg={} grid={grid}", fmt_f(self.lg))
    }
}

#[derive(Args, Debug)]
struct SystemArgs {
    /// Form degree
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Boundary condition
    #[arg(long, value_enum, default_value_t = BcArg::Normal)]
    bc: BcArg,
    /// Laplacian kind
    #[arg(long, value_enum, default_value_t = KindArg::Hodge)]
    kind: KindArg,
    /// Number of eigenvalues
    #[arg(long, default_value_t = 40)]
    m: usize,
    /// Hodge star clamping threshold (default 1e-4 * lg)
    #[arg(long)]
    eps: Option<f64>,
    /// Eigensolver residual tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl SystemArgs {
    fn describe(&self) -> String {
        let bc: BoundaryCondition = self.bc.into();
        let kind: LaplacianKind = self.kind.into();
        let eps = self
            .eps
            .map(|e| format!(" eps={}", fmt_f(e)))
            .unwrap_or_default();
        format!(
            "k={} bc={bc} kind={kind} m={}{eps} tol={}",
            self.k,
            self.m,
            fmt_f(self.tol)
        )
    }

    fn solve(&self, field: &ScalarField) -> Result<(LaplacianSystem, SpectrumResult), Error> {
        let sys = laplacian(field, self.k, self.bc.into(), self.kind.into(), self.eps)?;
        let spec = sys.spectrum(self.m, self.tol)?;
        Ok((sys, spec))
    }
}

#[derive(Args, Debug)]
struct SpectraArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    system: SystemArgs,
    /// Output CSV path (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvergenceArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    system: SystemArgs,
    /// Comma-separated grid lengths, e.g. 0.1,0.05
    #[arg(long = "lg-list", value_delimiter = ',', required = true)]
    lg_list: Vec<f64>,
    /// Output CSV path (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Optional SVG line-plot path
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BettiArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// OFF mesh input (triangles -> simplicial, polygons -> cell complex)
    #[arg(long, conflicts_with_all = ["shape", "sdf", "graph"])]
    mesh: Option<PathBuf>,
    /// Edge-list graph input, analyzed through its clique complex
    #[arg(long, conflicts_with_all = ["shape", "sdf", "mesh"])]
    graph: Option<PathBuf>,
    /// Maximum clique dimension for --graph
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    /// Eigensolver residual tolerance for grid kernels
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Output CSV path (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// Boundary condition
    #[arg(long, value_enum, default_value_t = BcArg::Normal)]
    bc: BcArg,
    /// Use identity Hodge stars (the combinatorial setting)
    #[arg(long)]
    identity_stars: bool,
    /// Hodge star clamping threshold (default 1e-4 * lg)
    #[arg(long)]
    eps: Option<f64>,
    /// Per-edge input values, one per line, in mask order
    #[arg(long)]
    field: Option<PathBuf>,
    /// Seed for the random input form used when --field is absent
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Decompose the gradient of a random 0-form instead of a random 1-form
    #[arg(long, conflicts_with = "field")]
    gradient: bool,
    /// Output CSV path (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// When set, write <prefix>.exact / .coexact / .harmonic value files
    #[arg(long)]
    components_out: Option<String>,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// Continuum boundary condition
    #[arg(long, value_enum, default_value_t = ExactBcArg::Dirichlet)]
    bc: ExactBcArg,
    /// Number of eigenvalues
    #[arg(long, default_value_t = 40)]
    m: usize,
    /// Output CSV path (stdout when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Relative tolerance for multiplicity grouping in CSV output.
pub const GROUP_TOL: f64 = 1e-6;

/// Parses the arguments, runs the command, and returns the process exit
/// code. Honors the DECLAP_THREADS environment variable.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    if let Ok(v) = std::env::var("DECLAP_THREADS") {
        match v.parse::<usize>() {
            Ok(1) => faer::set_global_parallelism(faer::Par::Seq),
            Ok(n) if n > 1 => faer::set_global_parallelism(faer::Par::rayon(n)),
            _ => {
                eprintln!("error: invalid DECLAP_THREADS value {v:?}");
                return 2;
            }
        }
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Spectra(a) => cmd_spectra(a),
        Command::Convergence(a) => cmd_convergence(a),
        Command::Betti(a) => cmd_betti(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Exact(a) => cmd_exact(a),
    }
}

fn fmt_f(v: f64) -> String {
    // shortest roundtrip formatting keeps config lines readable
    format!("{v}")
}

fn fmt_e(v: f64) -> String {
    format!("{v:.12e}")
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Assigns a multiplicity-group id to each value: consecutive eigenvalues
/// within GROUP_TOL relative share a group.
pub fn multiplicity_groups(values: &[f64]) -> Vec<usize> {
    let mut groups = Vec::with_capacity(values.len());
    let mut g = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if i > 0 {
            let prev = values[i - 1];
            let scale = v.abs().max(prev.abs()).max(1e-300);
            if (v - prev).abs() > GROUP_TOL * scale {
                g += 1;
            }
        }
        groups.push(g);
    }
    groups
}

fn cmd_spectra(a: SpectraArgs) -> Result<(), Error> {
    let field = a.domain.build_field()?;
    let (_, spec) = a.system.solve(&field)?;
    let mut out = String::new();
    writeln!(
        out,
        "# config: spectra {} {}",
        a.domain.describe(),
        a.system.describe()
    )
    .unwrap();
    writeln!(out, "# kernel_dim: {}", spec.kernel_dim).unwrap();
    writeln!(out, "index,eigenvalue,multiplicity_group").unwrap();
    let groups = multiplicity_groups(&spec.eigenvalues);
    for (i, (&v, &g)) in spec.eigenvalues.iter().zip(&groups).enumerate() {
        writeln!(out, "{i},{},{g}", fmt_e(v)).unwrap();
    }
    write_output(a.output.as_ref(), &out)
}

fn cmd_convergence(a: ConvergenceArgs) -> Result<(), Error> {
    if a.lg_list.is_empty() {
        return Err(Error::InvalidInput("empty --lg-list".into()));
    }
    let mut lgs = a.lg_list.clone();
    lgs.sort_by(|x, y| y.partial_cmp(x).ok_or(()).expect("NaN grid length"));
    let mut series = Vec::new();
    for &lg in &lgs {
        let mut domain = DomainArgs { lg, ..a.domain.clone_args() };
        domain.lg = lg;
        let field = domain.build_field()?;
        let (_, spec) = a.system.solve(&field)?;
        series.push((lg, spec.eigenvalues));
    }
    let exact = a
        .domain
        .exact_reference(a.system.bc.into(), a.system.m)
        .filter(|_| a.system.k == 0);

    let mut out = String::new();
    writeln!(
        out,
        "# config: convergence {} {} lg-list={}",
        a.domain.describe(),
        a.system.describe(),
        lgs.iter().map(|v| fmt_f(*v)).collect::<Vec<_>>().join(",")
    )
    .unwrap();
    writeln!(out, "lg,index,eigenvalue").unwrap();
    for (lg, eigs) in &series {
        for (i, &v) in eigs.iter().enumerate() {
            writeln!(out, "{},{i},{}", fmt_f(*lg), fmt_e(v)).unwrap();
        }
    }
    if let Some(exact) = &exact {
        for (i, &v) in exact.iter().enumerate() {
            writeln!(out, "exact,{i},{}", fmt_e(v)).unwrap();
        }
    }
    write_output(a.output.as_ref(), &out)?;
    if let Some(svg) = &a.svg {
        let plot = render_svg(&series, exact.as_deref());
        std::fs::write(svg, plot)?;
    }
    Ok(())
}

impl DomainArgs {
    fn clone_args(&self) -> DomainArgs {
        DomainArgs {
            shape: self.shape,
            radius: self.radius,
            side: self.side,
            major: self.major,
            minor: self.minor,
            outer: self.outer,
            inner: self.inner,
            lg: self.lg,
            grid: self.grid,
            sdf: self.sdf.clone(),
        }
    }
}

/// Minimal hand-emitted SVG: eigenvalue (y) against index (x), one polyline
/// per grid length plus a dashed exact overlay.
fn render_svg(series: &[(f64, Vec<f64>)], exact: Option<&[f64]>) -> String {
    const W: f64 = 640.0;
    const H: f64 = 440.0;
    const ML: f64 = 60.0;
    const MB: f64 = 50.0;
    const MT: f64 = 20.0;
    const MR: f64 = 20.0;
    let max_n = series
        .iter()
        .map(|(_, e)| e.len())
        .chain(exact.map(|e| e.len()))
        .max()
        .unwrap_or(1)
        .max(2);
    let max_v = series
        .iter()
        .flat_map(|(_, e)| e.iter())
        .chain(exact.into_iter().flatten())
        .cloned()
        .fold(1e-300f64, f64::max);
    let x = |i: usize| ML + (W - ML - MR) * i as f64 / (max_n - 1) as f64;
    let y = |v: f64| H - MB - (H - MB - MT) * (v / max_v).clamp(0.0, 1.0);
    let colors = ["#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d68910", "#16a085"];
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">"
    )
    .unwrap();
    writeln!(
        s,
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\
         <line x1=\"{ML}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>\
         <line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{0}\" stroke=\"black\"/>",
        H - MB,
        W - MR
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\">eigenvalue index</text>\
         <text x=\"14\" y=\"{}\" font-size=\"13\" transform=\"rotate(-90 14 {})\">eigenvalue</text>",
        (W - ML) / 2.0,
        H - 14.0,
        H / 2.0,
        H / 2.0
    )
    .unwrap();
    let mut legend_y = MT + 14.0;
    let mut draw = |vals: &[f64], color: &str, dash: &str, label: &str, s: &mut String| {
        let pts: Vec<String> = vals
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{:.2},{:.2}", x(i), y(v)))
            .collect();
        writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash} \
             points=\"{}\"/>",
            pts.join(" ")
        )
        .unwrap();
        writeln!(
            s,
            "<text x=\"{}\" y=\"{legend_y:.1}\" font-size=\"12\" fill=\"{color}\">{label}</text>",
            ML + 10.0
        )
        .unwrap();
        legend_y += 16.0;
    };
    for (ci, (lg, eigs)) in series.iter().enumerate() {
        let color = colors[ci % colors.len()];
        draw(eigs, color, "", &format!("lg={}", fmt_f(*lg)), &mut s);
    }
    if let Some(exact) = exact {
        draw(
            exact,
            "#444444",
            " stroke-dasharray=\"6 4\"",
            "exact",
            &mut s,
        );
    }
    writeln!(s, "</svg>").unwrap();
    s
}

fn cmd_betti(a: BettiArgs) -> Result<(), Error> {
    let mut out = String::new();
    let betti: Vec<usize>;
    if let Some(mesh) = &a.mesh {
        let text = std::fs::read_to_string(mesh)?;
        let (points, faces) = read_off(&text)?;
        if faces.iter().all(|f| f.len() == 3) {
            let complex = SimplicialComplex::from_simplices(Some(points), &faces)?;
            betti = complex.betti_numbers(2)?;
            writeln!(out, "# config: betti mesh={} kind=simplicial", mesh.display()).unwrap();
        } else {
            let complex = CellComplex::from_faces(points.len(), faces)?;
            let (b0, b1, b2) = complex.betti_numbers()?;
            betti = vec![b0, b1, b2];
            writeln!(out, "# config: betti mesh={} kind=cell", mesh.display()).unwrap();
        }
    } else if let Some(graph) = &a.graph {
        let text = std::fs::read_to_string(graph)?;
        let (nv, edges) = read_edge_list(&text)?;
        let complex = clique_complex(nv, &edges, a.max_dim)?;
        betti = complex.betti_numbers(a.max_dim.min(3))?;
        writeln!(
            out,
            "# config: betti graph={} max-dim={}",
            graph.display(),
            a.max_dim
        )
        .unwrap();
    } else {
        // beta_k of the domain = kernel of the BIG L_{dim-k,n}
        let field = a.domain.build_field()?;
        let dim = field.grid().dim();
        let mut b = Vec::new();
        for k in 0..=dim {
            let sys = laplacian(
                &field,
                dim - k,
                BoundaryCondition::Normal,
                LaplacianKind::Big,
                None,
            )?;
            let spec = sys.spectrum(8.min(sys.size()), a.tol)?;
            if spec.kernel_indeterminate {
                return Err(Error::Numerical(format!(
                    "kernel detection ambiguous for L_{{{},n}}",
                    dim - k
                )));
            }
            b.push(spec.kernel_dim);
        }
        betti = b;
        writeln!(out, "# config: betti {} tol={}", a.domain.describe(), fmt_f(a.tol)).unwrap();
    }
    writeln!(out, "k,betti").unwrap();
    for (k, b) in betti.iter().enumerate() {
        writeln!(out, "{k},{b}").unwrap();
    }
    write_output(a.output.as_ref(), &out)
}

fn cmd_decompose(a: DecomposeArgs) -> Result<(), Error> {
    let field = a.domain.build_field()?;
    let ctx = grid_form_context(&field, a.bc.into(), a.eps)?;
    let ctx_used = if a.identity_stars {
        ctx.with_identity_stars()
    } else {
        ctx.clone()
    };
    let n = ctx.d0.nrows();
    let values: Vec<f64> = if let Some(path) = &a.field {
        let text = std::fs::read_to_string(path)?;
        let v: Vec<f64> = text
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::Format(format!("bad field value {t:?}: {e}")))
            })
            .collect::<Result<_, Error>>()?;
        if v.len() != n {
            return Err(Error::InvalidInput(format!(
                "field file holds {} values, the domain has {n} edges",
                v.len()
            )));
        }
        v
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
        if a.gradient {
            let f: Vec<f64> = (0..ctx.d0.ncols())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            ctx.d0.mul_vec(&f)
        } else {
            (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
        }
    };
    let form = DiscreteForm::new(1, values);
    let dec = decompose(&ctx_used, &form)?;

    let norm = star_norm(&ctx.s1, &form.values).max(1e-300);
    let mut out = String::new();
    writeln!(
        out,
        "# config: decompose {} bc={} identity-stars={} seed={} gradient={}",
        a.domain.describe(),
        BoundaryCondition::from(a.bc),
        a.identity_stars,
        a.seed,
        a.gradient
    )
    .unwrap();
    writeln!(out, "component,s_norm,fraction").unwrap();
    let comps = [
        ("input", &form.values),
        ("exact", &dec.exact.values),
        ("coexact", &dec.coexact.values),
        ("harmonic", &dec.harmonic.values),
    ];
    for (name, v) in comps {
        let s = star_norm(&ctx.s1, v);
        writeln!(out, "{name},{},{}", fmt_e(s), fmt_e(s / norm)).unwrap();
    }
    // star-weighted curl and divergence residuals of the harmonic part
    let h_norm = star_norm(&ctx.s1, &dec.harmonic.values).max(1e-300);
    let curl = discrete_curl(&ctx, &dec.harmonic)?;
    let div = discrete_div(&ctx, &dec.harmonic)?;
    let curl_frac = star_norm(&ctx.s2, &curl.values) / h_norm;
    let div_frac = star_norm(&ctx.s0, &div.values) / h_norm;
    writeln!(out, "harmonic_curl_residual,{},{}", fmt_e(curl_frac * h_norm), fmt_e(curl_frac))
        .unwrap();
    writeln!(out, "harmonic_div_residual,{},{}", fmt_e(div_frac * h_norm), fmt_e(div_frac))
        .unwrap();
    let recon = form
        .values
        .iter()
        .zip(dec.exact.values.iter().zip(dec.coexact.values.iter().zip(&dec.harmonic.values)))
        .map(|(&w, (&e, (&c, &h)))| (w - e - c - h).powi(2))
        .sum::<f64>()
        .sqrt();
    writeln!(out, "reconstruction_residual,{},{}", fmt_e(recon), fmt_e(recon / norm)).unwrap();
    write_output(a.output.as_ref(), &out)?;

    if let Some(prefix) = &a.components_out {
        for (name, v) in [
            ("exact", &dec.exact.values),
            ("coexact", &dec.coexact.values),
            ("harmonic", &dec.harmonic.values),
        ] {
            let body: String = v.iter().map(|x| format!("{}\n", fmt_e(*x))).collect();
            std::fs::write(format!("{prefix}.{name}"), body)?;
        }
    }
    Ok(())
}

fn cmd_exact(a: ExactArgs) -> Result<(), Error> {
    let kind = a.domain.shape_kind()?;
    let bc: ExactBc = a.bc.into();
    let values = match kind {
        ShapeKind::Disk { radius } => disk_spectrum(radius, bc, a.m)?,
        ShapeKind::Square { side } => box_spectrum(&[side, side], bc, a.m)?,
        ShapeKind::Ball { radius } => ball_spectrum(radius, bc, a.m)?,
        ShapeKind::Cube { side } => box_spectrum(&[side, side, side], bc, a.m)?,
        ShapeKind::Shell { outer, inner } => shell_spectrum(outer, inner, bc, a.m)?,
        ShapeKind::Torus { .. } => {
            return Err(Error::InvalidInput(
                "no exact spectrum is available for the torus".into(),
            ))
        }
    };
    let bc_name = match a.bc {
        ExactBcArg::Dirichlet => "dirichlet",
        ExactBcArg::Neumann => "neumann",
    };
    let mut out = String::new();
    writeln!(
        out,
        "# config: exact {} bc={bc_name} m={}",
        a.domain.describe(),
        a.m
    )
    .unwrap();
    writeln!(out, "index,eigenvalue,multiplicity_group").unwrap();
    let groups = multiplicity_groups(&values);
    for (i, (&v, &g)) in values.iter().zip(&groups).enumerate() {
        writeln!(out, "{i},{},{g}", fmt_e(v)).unwrap();
    }
    write_output(a.output.as_ref(), &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_assignment() {
        let g = multiplicity_groups(&[0.0, 2.0, 2.0 + 1e-9, 4.0]);
        assert_eq!(g, vec![0, 1, 1, 2]);
        assert!(multiplicity_groups(&[]).is_empty());
    }

    #[test]
    fn fig_disk_spectra_runs() {
        let args = [
            "declap", "spectra", "--shape", "disk", "--R", "1", "--lg", "1", "--grid",
            "fig-example", "--k", "0", "--bc", "normal", "--kind", "big", "--m", "4",
        ];
        assert_eq!(run(args), 0);
    }

    #[test]
    fn config_error_exit_code() {
        let args = ["declap", "spectra", "--lg", "0.5"];
        assert_eq!(run(args), 2);
        let args = ["declap", "exact", "--shape", "torus"];
        assert_eq!(run(args), 2);
    }
}
