#include "mobopt/evaluator.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "mobopt/errors.hpp"

namespace mobopt {

using nlohmann::json;

EvaluatorProcess::EvaluatorProcess(ExternalEvaluatorOptions options, SearchSpace space,
                                   ObjectiveSpec objectives)
    : options_(std::move(options)), space_(std::move(space)),
      objectives_(std::move(objectives)) {
    if (options_.command.empty())
        throw ArgumentError("external evaluator: empty command");
    std::signal(SIGPIPE, SIG_IGN);
}

EvaluatorProcess::~EvaluatorProcess() { shutdown(true); }

bool EvaluatorProcess::running() const { return child_pid_ > 0; }

void EvaluatorProcess::spawn() {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
        throw EvaluationFailure(EvaluationFailure::Kind::ProcessExit,
                                "failed to create evaluator pipes");
    const pid_t pid = fork();
    if (pid < 0)
        throw EvaluationFailure(EvaluationFailure::Kind::ProcessExit,
                                "failed to fork evaluator process");
    if (pid == 0) {
        setpgid(0, 0); // own process group so a kill reaches grandchildren
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        execl("/bin/sh", "sh", "-c", options_.command.c_str(), nullptr);
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    child_pid_ = pid;
    to_child_ = to_child[1];
    from_child_ = from_child[0];
    buffer_.clear();
}

void EvaluatorProcess::shutdown(bool force) {
    if (to_child_ >= 0) {
        close(to_child_);
        to_child_ = -1;
    }
    if (from_child_ >= 0) {
        close(from_child_);
        from_child_ = -1;
    }
    if (child_pid_ > 0) {
        if (force) {
            kill(-child_pid_, SIGKILL); // whole group, including grandchildren
            kill(child_pid_, SIGKILL);
        }
        int status = 0;
        waitpid(child_pid_, &status, force ? 0 : WNOHANG);
        child_pid_ = -1;
    }
}

std::string EvaluatorProcess::read_line(double timeout_seconds) {
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(timeout_seconds);
    for (;;) {
        const auto pos = buffer_.find('\n');
        if (pos != std::string::npos) {
            std::string line = buffer_.substr(0, pos);
            buffer_.erase(0, pos + 1);
            return line;
        }
        const auto remaining = std::chrono::duration<double>(
                                   deadline - std::chrono::steady_clock::now())
                                   .count();
        if (remaining <= 0.0) {
            shutdown(true);
            throw EvaluationFailure(EvaluationFailure::Kind::Timeout,
                                    "evaluator response timed out");
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int rc = poll(&pfd, 1, static_cast<int>(std::ceil(remaining * 1000.0)));
        if (rc < 0) {
            if (errno == EINTR)
                continue;
            shutdown(true);
            throw EvaluationFailure(EvaluationFailure::Kind::ProcessExit,
                                    std::string("poll failed: ") + std::strerror(errno));
        }
        if (rc == 0)
            continue; // loop re-checks the deadline
        char chunk[4096];
        const ssize_t got = read(from_child_, chunk, sizeof(chunk));
        if (got < 0) {
            if (errno == EINTR)
                continue;
            shutdown(true);
            throw EvaluationFailure(EvaluationFailure::Kind::ProcessExit,
                                    std::string("read failed: ") + std::strerror(errno));
        }
        if (got == 0) {
            shutdown(true);
            throw EvaluationFailure(EvaluationFailure::Kind::ProcessExit,
                                    "evaluator closed its output stream");
        }
        buffer_.append(chunk, static_cast<std::size_t>(got));
    }
}

std::vector<double> EvaluatorProcess::evaluate(int request_id,
                                               const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(space_.dimension()))
        throw DimensionError("external evaluator: point dimension mismatch");
    if (!running())
        spawn();

    json request;
    request["id"] = request_id;
    json params = json::object();
    for (int d = 0; d < space_.dimension(); ++d)
        params[space_.param(d).name] = x[static_cast<std::size_t>(d)];
    request["params"] = std::move(params);
    std::string line = request.dump();
    line.push_back('\n');

    std::size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = write(to_child_, line.data() + written, line.size() - written);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            shutdown(true);
            throw EvaluationFailure(EvaluationFailure::Kind::ProcessExit,
                                    "evaluator stdin closed");
        }
        written += static_cast<std::size_t>(n);
    }

    const std::string response_line = read_line(options_.timeout_seconds);
    json response;
    try {
        response = json::parse(response_line);
    } catch (const json::parse_error& e) {
        throw EvaluationFailure(EvaluationFailure::Kind::Malformed,
                                std::string("bad evaluator JSON: ") + e.what());
    }
    if (!response.is_object() || !response.contains("id") ||
        !response["id"].is_number_integer() || response["id"].get<int>() != request_id)
        throw EvaluationFailure(EvaluationFailure::Kind::Malformed,
                                "evaluator response id mismatch");
    if (response.contains("error"))
        throw EvaluationFailure(EvaluationFailure::Kind::ProcessExit,
                                "evaluator error: " +
                                    response["error"].get<std::string>());
    if (!response.contains("objectives") || !response["objectives"].is_object())
        throw EvaluationFailure(EvaluationFailure::Kind::Malformed,
                                "evaluator response missing objectives");

    const json& objs = response["objectives"];
    std::vector<double> f;
    f.reserve(static_cast<std::size_t>(objectives_.count()));
    for (const auto& o : objectives_.objectives()) {
        if (!objs.contains(o.name))
            throw EvaluationFailure(EvaluationFailure::Kind::Malformed,
                                    "evaluator response missing objective '" + o.name +
                                        "'");
        // NaN cannot ride in JSON; evaluators produce null for it.
        if (!objs[o.name].is_number() ||
            !std::isfinite(objs[o.name].get<double>()))
            throw EvaluationFailure(EvaluationFailure::Kind::NonFinite,
                                    "evaluator returned non-finite '" + o.name + "'");
        f.push_back(objs[o.name].get<double>());
    }
    return f;
}

Problem make_external_problem(ExternalEvaluatorOptions options, SearchSpace space,
                              ObjectiveSpec objectives,
                              std::vector<double> default_reference) {
    auto process = std::make_shared<EvaluatorProcess>(options, space, objectives);
    auto counter = std::make_shared<int>(0);
    Problem p{
        "external",
        space,
        objectives,
        {},
        std::nullopt,
        std::move(default_reference),
    };
    p.evaluate = [process, counter](const std::vector<double>& x) {
        return process->evaluate((*counter)++, x);
    };
    return p;
}

} // namespace mobopt
