use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::{CliError, Output};

#[derive(Parser)]
#[command(name = "jumploci", version, about = "Exceptional characters, twisted H1 and tree actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Twisted H1 of a presentation at one character.
    H1 {
        file: PathBuf,
        #[arg(long, default_value = "Q")]
        field: String,
        /// Generator images, e.g. `t=2,a=1`.
        #[arg(long = "char")]
        character: String,
    },
    /// Every exceptional character over a finite field.
    Jumplocus {
        file: PathBuf,
        #[arg(long)]
        field: String,
    },
    /// Alexander matrix, minimal-prime characters and BNS rays.
    Alexander {
        file: PathBuf,
        #[arg(long = "char-p", default_value_t = 0)]
        char_p: u64,
        /// Word used for the commutator cocycle of every record.
        #[arg(long)]
        g0: Option<String>,
    },
    /// Bruhat-Tits tree of a discretely valued field.
    Tree {
        #[command(subcommand)]
        op: TreeOp,
    },
    /// Classify the affine action given by a character and a cocycle.
    #[command(name = "prop6")]
    Affine {
        file: PathBuf,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long = "char")]
        character: String,
        /// Cocycle values on generators, e.g. `a=1,t=0`.
        #[arg(long)]
        cocycle: String,
        #[arg(long, default_value = "p:2")]
        val: String,
    },
    /// Orbifold group prediction and optional cross-check.
    Orbifold {
        #[arg(long)]
        genus: u32,
        /// Cone orders, e.g. `2,2`.
        #[arg(long, value_delimiter = ',')]
        cone: Vec<u64>,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Criterion ids to run, e.g. `1,2,9`.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        /// One text line per criterion instead of JSON.
        #[arg(long)]
        lines: bool,
    },
}

#[derive(Args, Clone)]
struct TreeArgs {
    #[arg(long, default_value = "Q")]
    field: String,
    #[arg(long, default_value = "p:2")]
    val: String,
    /// Entries `a,b,c,d` of `[[a,b],[c,d]]`.
    #[arg(long, default_value = "1,0,0,1")]
    matrix: String,
}

#[derive(Subcommand)]
enum TreeOp {
    /// Elliptic, inversion or hyperbolic, with translation length.
    Classify(TreeArgs),
    /// Canonical form of the lattice class spanned by the columns.
    Canonical(TreeArgs),
    /// Busemann cocycle at the Borel end of an upper-triangular matrix.
    Busemann(TreeArgs),
    /// Ball around the lattice class of the matrix.
    Ball {
        #[command(flatten)]
        args: TreeArgs,
        #[arg(long, default_value_t = 1)]
        radius: u64,
        /// Emit Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Neighbors of the lattice class of the matrix.
    Neighbors(TreeArgs),
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::H1 { file, field, character } => commands::h1(&file, &field, &character),
        Command::Jumplocus { file, field } => commands::jumplocus(&file, &field),
        Command::Alexander { file, char_p, g0 } => commands::alexander(&file, char_p, g0.as_deref()),
        Command::Tree { op } => match op {
            TreeOp::Classify(a) => commands::tree_classify(&a.field, &a.val, &a.matrix),
            TreeOp::Canonical(a) => commands::tree_canonical(&a.field, &a.val, &a.matrix),
            TreeOp::Busemann(a) => commands::tree_busemann(&a.field, &a.val, &a.matrix),
            TreeOp::Ball { args, radius, dot } => commands::tree_ball(&args.field, &args.val, &args.matrix, radius, dot),
            TreeOp::Neighbors(a) => commands::tree_neighbors(&a.field, &a.val, &a.matrix),
        },
        Command::Affine {
            file,
            field,
            character,
            cocycle,
            val,
        } => commands::affine_action(&file, &field, &character, &cocycle, &val),
        Command::Orbifold {
            genus,
            cone,
            field,
            check,
            budget,
        } => commands::orbifold(genus, cone, &field, check, budget),
        Command::Selftest { only, lines } => commands::selftest(&only, lines),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
