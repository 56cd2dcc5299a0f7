fn main() {
    // Die quietly on a closed pipe, like any other filter, instead of
    // panicking out of println when a reader such as head exits early.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(stav_cli::run());
}
