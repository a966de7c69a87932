fn main() {
    std::process::exit(atomloc::cli::main_with_env());
}
