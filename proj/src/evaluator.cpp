#include "tilenas/evaluator.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

namespace tilenas {

double SurrogateEvaluator::evaluate(const ChildNetwork& net) {
  double load = double(net.total_macs()) / mac_scale_ + depth_weight_ * net.layers.size();
  double a = 1.0 - std::exp(-load);
  if (noise_ > 0.0) {
    // per-network deterministic perturbation: hash the descriptor with the seed
    uint64_t h = seed_ ^ 0x9e3779b97f4a7c15ULL;
    for (char c : describe_network(net)) h = (h ^ uint64_t(c)) * 0x100000001b3ULL;
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    double u = double(h >> 11) * 0x1p-53;  // [0,1)
    a += noise_ * (2.0 * u - 1.0);
  }
  return std::clamp(a, 0.0, 1.0);
}

std::string CommandEvaluator::protocol_input(const ChildNetwork& net) {
  std::ostringstream out;
  for (size_t i = 0; i < net.layers.size(); ++i) {
    const auto& l = net.layers[i];
    out << "layer " << i + 1 << " kh " << l.kh << " kw " << l.kw << " n " << l.in_ch
        << " m " << l.out_ch << " r " << l.rows << " c " << l.cols << "\n";
  }
  return out.str();
}

double CommandEvaluator::evaluate(const ChildNetwork& net) {
  // The child may exit without reading its stdin; writing then raises SIGPIPE,
  // which must not kill the search process. write() reports EPIPE instead.
  static const bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  int in_pipe[2];   // parent -> child stdin
  int out_pipe[2];  // child stdout -> parent
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw EvaluatorError("pipe() failed");

  pid_t pid = fork();
  if (pid < 0) throw EvaluatorError("fork() failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);

  std::string input = protocol_input(net);
  size_t off = 0;
  while (off < input.size()) {
    ssize_t w = write(in_pipe[1], input.data() + off, input.size() - off);
    if (w <= 0) break;  // child may exit without reading everything
    off += size_t(w);
  }
  close(in_pipe[1]);

  std::string output;
  char buf[4096];
  int64_t budget_ms = int64_t(timeout_sec_ * 1000.0);
  bool timed_out = false;
  for (;;) {
    struct pollfd pfd = {out_pipe[0], POLLIN, 0};
    int rc = poll(&pfd, 1, int(std::min<int64_t>(budget_ms, 200)));
    if (rc > 0) {
      ssize_t r = read(out_pipe[0], buf, sizeof(buf));
      if (r <= 0) break;
      output.append(buf, size_t(r));
    } else if (rc == 0) {
      budget_ms -= 200;
      if (budget_ms <= 0) {
        timed_out = true;
        break;
      }
    } else {
      break;
    }
  }
  close(out_pipe[0]);
  if (timed_out) kill(pid, SIGKILL);

  int status = 0;
  waitpid(pid, &status, 0);
  if (timed_out) throw EvaluatorError("evaluator command timed out");
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw EvaluatorError("evaluator command failed (nonzero exit)");

  std::istringstream parse(output);
  double a = 0;
  if (!(parse >> a)) throw EvaluatorError("evaluator produced no parsable accuracy");
  if (a < 0.0 || a > 1.0)
    throw EvaluatorError("evaluator accuracy out of [0,1]: " + std::to_string(a));
  return a;
}

}  // namespace tilenas
