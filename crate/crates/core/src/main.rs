fn main() {
    std::process::exit(jacobi_lift::cli::main_entry());
}
