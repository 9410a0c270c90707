fn main() {
    std::process::exit(allcast::cli::main_entry());
}
