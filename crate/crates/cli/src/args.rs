use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "dvfield", version, about = "Exact computations in valued fields with derivations")]
pub struct Cli {
    /// Model file (TOML).  Without one, the rank-2 model ℤ + ℤω with ∂₀ is used.
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,

    /// Override the model's working precision, e.g. "[6;0]".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub precision: Option<String>,

    /// Seed for the invariant suites.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,

    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a series and print its normal form.
    Eval {
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Valuation of a series.
    Val {
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Residue of an element of the valuation ring.
    Res {
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Generalized residue ŵres(x) ∈ k[ε] of an element of R.
    Wres {
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Ring membership (R, Q, I, 𝒪) and tame/wild class.
    Classify {
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Specialization of a line given as comma-separated coordinates.
    Specialize {
        #[arg(allow_hyphen_values = true)]
        line: String,
    },
    /// Specialization of the Kronecker line arg ⊗ base.
    Mutate {
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(allow_hyphen_values = true)]
        arg: String,
    },
    /// Newton polygon of a polynomial given by its coefficients a0, a1, ….
    Newton {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Valuative Rolle check on the ball val(x − center) ≥ radius.
    Rolle {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long, allow_hyphen_values = true)]
        radius: String,
    },
    /// Some x with val(x − a) > γ and δx = b; grows the model.
    Density {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Expresses one of three elements through the other two over Q; may grow the model.
    Reduce3 {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// The unliftability game on ℤ + ℤω.
    Game(GameArgs),
    /// Run an invariant suite, or `all`.
    Check { suite: String },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = false)]
pub struct GameArgs {
    /// The unit u with ∂₁ = u·∂₀.
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "1 + t")]
    pub u: String,

    /// The adversary's reply a′.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub adversary: Option<String>,

    #[command(subcommand)]
    pub check: Option<GameCheck>,
}

#[derive(Debug, Subcommand)]
pub enum GameCheck {
    /// Which of the three identities the lifts (b′, c′) violate.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        bprime: String,
        #[arg(long, allow_hyphen_values = true)]
        cprime: String,
    },
}
