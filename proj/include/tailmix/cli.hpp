#ifndef TAILMIX_CLI_HPP
#define TAILMIX_CLI_HPP

namespace tailmix::cli {

/// Batch front end. Subcommands: tail-curve, eta-sweep, bias-study, fit,
/// simulate, lambda. Returns the process exit code: 0 iff the requested
/// output was written. All randomness is controlled by --seed; --threads
/// changes wall time only, never output bytes.
int run(int argc, const char* const* argv);

}  // namespace tailmix::cli

#endif  // TAILMIX_CLI_HPP
