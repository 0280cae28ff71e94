fn main() {
    std::process::exit(abscroll::main_with(std::env::args_os()));
}
