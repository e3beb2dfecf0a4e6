#ifndef MOBOPT_EVALUATOR_HPP
#define MOBOPT_EVALUATOR_HPP

#include <memory>
#include <string>
#include <vector>

#include "mobopt/objectives.hpp"
#include "mobopt/problems.hpp"
#include "mobopt/search_space.hpp"

namespace mobopt {

struct ExternalEvaluatorOptions {
    std::string command;            // run through /bin/sh -c
    double timeout_seconds = 3600.0;
};

/// Child-process objective evaluator speaking line-delimited JSON over its
/// standard streams. One request per line:
///   {"id": <int>, "params": {<name>: <number>, ...}}
/// and one response per line:
///   {"id": <int>, "objectives": {<name>: <number>, ...}}
///   {"id": <int>, "error": "<message>"}
/// Requests are single-in-flight; responses must carry the request id.
/// Timeouts, malformed or non-finite responses, and process exits raise
/// EvaluationFailure; the process is respawned on the next request after a
/// fatal failure.
class EvaluatorProcess {
public:
    EvaluatorProcess(ExternalEvaluatorOptions options, SearchSpace space,
                     ObjectiveSpec objectives);
    ~EvaluatorProcess();

    EvaluatorProcess(const EvaluatorProcess&) = delete;
    EvaluatorProcess& operator=(const EvaluatorProcess&) = delete;

    /// Evaluate one raw-units point; returns raw objective values in spec
    /// order. Throws EvaluationFailure.
    std::vector<double> evaluate(int request_id, const std::vector<double>& x);

    bool running() const;

private:
    void spawn();
    void shutdown(bool force);
    std::string read_line(double timeout_seconds);

    ExternalEvaluatorOptions options_;
    SearchSpace space_;
    ObjectiveSpec objectives_;
    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

/// Wrap an external evaluator as a Problem (shared process, lazily spawned).
Problem make_external_problem(ExternalEvaluatorOptions options, SearchSpace space,
                              ObjectiveSpec objectives,
                              std::vector<double> default_reference);

} // namespace mobopt

#endif
