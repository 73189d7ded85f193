// `!(x > 0.0)` keeps NaN out of validated inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;

fn main() {
    std::process::exit(cli::main());
}
