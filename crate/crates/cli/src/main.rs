fn main() {
    std::process::exit(preserver_lab::run(std::env::args_os()));
}
