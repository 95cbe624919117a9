#include "ccusplan/solver.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ccusplan::milp {

namespace {

using nlohmann::json;

// JSON has no infinity; the wire uses this sentinel on both sides.
constexpr double kWireInf = 1e30;

double clip_inf(double v) {
  if (v >= kInf) return kWireInf;
  if (v <= -kInf) return -kWireInf;
  return v;
}

std::string getenv_or(const char* key, const std::string& fallback) {
  const char* v = std::getenv(key);
  return (v && *v) ? std::string(v) : fallback;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelError("cannot write " + path);
  out << content;
  if (!out) throw ModelError("short write to " + path);
}

// stdin/stdout stay clean for the CLI; the helper talks through files.
const char* kSolverScript = R"PY(import json
import sys
import time
import traceback

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

INF = 1e30


def widen(a):
    a = np.asarray(a, dtype=float)
    a = np.where(a >= INF, np.inf, a)
    a = np.where(a <= -INF, -np.inf, a)
    return a


def build_matrix(model):
    rows = model["rows"]
    n = model["ncols"]
    data, ri, ci = [], [], []
    rlb, rub = [], []
    for r, row in enumerate(rows):
        for c, v in zip(row["idx"], row["val"]):
            ri.append(r)
            ci.append(c)
            data.append(v)
        rlb.append(row["lb"])
        rub.append(row["ub"])
    a = sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))
    return a, widen(rlb), widen(rub)


def run_job(model, matrix, job, options):
    n = model["ncols"]
    obj = np.array(model["obj"], dtype=float)
    lb = np.array(model["lb"], dtype=float)
    ub = np.array(model["ub"], dtype=float)
    integrality = np.array(model["integrality"], dtype=int)
    for col, coef in job.get("obj", []):
        obj[col] = coef
    for col, lo, hi in job.get("fix", []):
        lb[col] = lo
        ub[col] = hi
    if job.get("relax", False):
        integrality = np.zeros(n, dtype=int)
    a, rlb, rub = matrix
    cons = LinearConstraint(a, rlb, rub) if a.shape[0] > 0 else []
    opts = {"disp": False}
    if options.get("gap_tol", 0.0) > 0.0 and integrality.any():
        opts["mip_rel_gap"] = options["gap_tol"]
    if options.get("time_limit", 0.0) > 0.0:
        opts["time_limit"] = options["time_limit"]
    t0 = time.perf_counter()
    res = milp(
        c=obj,
        constraints=cons,
        integrality=integrality,
        bounds=Bounds(widen(lb), widen(ub)),
        options=opts,
    )
    wall = time.perf_counter() - t0
    out = {
        "status": "error",
        "objective": None,
        "values": None,
        "gap": 0.0,
        "time": wall,
        "message": str(res.message),
    }
    gap = getattr(res, "mip_gap", None)
    if gap is not None and np.isfinite(gap):
        out["gap"] = float(gap)
    if res.status == 0:
        out["status"] = "optimal"
    elif res.status == 1:
        out["status"] = "time-limit"
    elif res.status == 2:
        out["status"] = "infeasible"
    elif res.status == 3:
        out["status"] = "unbounded"
    if res.x is not None:
        out["values"] = [float(v) for v in res.x]
        out["objective"] = float(res.fun) + float(model.get("obj_const", 0.0))
    return out


def main():
    in_path, out_path = sys.argv[1], sys.argv[2]
    with open(in_path) as f:
        req = json.load(f)
    options = req.get("options", {})
    results = []
    for problem in req["problems"]:
        model = problem["model"]
        matrix = build_matrix(model)
        jobs = problem.get("jobs") or [{}]
        results.append([run_job(model, matrix, job, options) for job in jobs])
    with open(out_path, "w") as f:
        json.dump({"results": results}, f)


if __name__ == "__main__":
    try:
        main()
    except Exception:
        traceback.print_exc()
        sys.exit(1)
)PY";

json model_to_wire(const Model& m) {
  json obj = json::array();
  json lb = json::array();
  json ub = json::array();
  json integrality = json::array();
  std::vector<double> coeffs(m.num_variables(), 0.0);
  for (const Term& t : m.objective().terms) coeffs[t.var.index] = t.coeff;
  for (std::size_t i = 0; i < m.num_variables(); ++i) {
    const Variable& v = m.variable(VarHandle{static_cast<std::int32_t>(i)});
    obj.push_back(coeffs[i]);
    lb.push_back(clip_inf(v.lower));
    ub.push_back(clip_inf(v.upper));
    integrality.push_back(v.kind == VarKind::Continuous ? 0 : 1);
  }
  json rows = json::array();
  for (const Constraint& c : m.constraints()) {
    json idx = json::array();
    json val = json::array();
    for (const Term& t : c.terms) {
      idx.push_back(t.var.index);
      val.push_back(t.coeff);
    }
    double rlb = -kWireInf, rub = kWireInf;
    switch (c.sense) {
      case Sense::LessEqual: rub = c.rhs; break;
      case Sense::GreaterEqual: rlb = c.rhs; break;
      case Sense::Equal: rlb = rub = c.rhs; break;
    }
    rows.push_back({{"lb", rlb}, {"ub", rub}, {"idx", idx}, {"val", val}});
  }
  return json{{"ncols", m.num_variables()},
              {"obj", obj},
              {"obj_const", m.objective().constant},
              {"lb", lb},
              {"ub", ub},
              {"integrality", integrality},
              {"rows", rows}};
}

SolveResult result_from_wire(const json& r) {
  SolveResult out;
  std::string status = r.value("status", "error");
  if (status == "optimal") out.status = SolveStatus::Optimal;
  else if (status == "time-limit") out.status = SolveStatus::TimeLimit;
  else if (status == "infeasible") out.status = SolveStatus::Infeasible;
  else if (status == "unbounded") out.status = SolveStatus::Unbounded;
  else out.status = SolveStatus::Error;
  if (r.contains("objective") && !r["objective"].is_null())
    out.objective = r["objective"].get<double>();
  if (r.contains("values") && !r["values"].is_null())
    out.values = r["values"].get<std::vector<double>>();
  out.gap = r.value("gap", 0.0);
  out.wall_time_s = r.value("time", 0.0);
  out.message = r.value("message", "");
  return out;
}

std::vector<std::vector<SolveResult>> all_errors(const std::vector<Solver::Batch>& batch,
                                                 const std::string& message) {
  std::vector<std::vector<SolveResult>> out;
  out.reserve(batch.size());
  for (const auto& b : batch) {
    std::size_t n = b.jobs.empty() ? 1 : b.jobs.size();
    SolveResult r;
    r.status = SolveStatus::Error;
    r.message = message;
    out.emplace_back(n, r);
  }
  return out;
}

} // namespace

SolveResult Solver::solve(const Model& model, const SolveOptions& opts) {
  Batch b;
  b.model = &model;
  return solve_batch({b}, opts).at(0).at(0);
}

std::vector<SolveResult> Solver::solve_jobs(const Model& model,
                                            const std::vector<SolveJob>& jobs,
                                            const SolveOptions& opts) {
  Batch b;
  b.model = &model;
  b.jobs = jobs;
  return solve_batch({b}, opts).at(0);
}

SubprocessSolver::SubprocessSolver() {
  python_ = getenv_or("CCUSPLAN_PYTHON", "python3");
  std::string tmpl = (std::filesystem::temp_directory_path() / "ccusplan.XXXXXX").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) throw ModelError("cannot create solver work directory");
  workdir_.assign(buf.data());
  script_ = getenv_or("CCUSPLAN_SOLVER_SCRIPT", "");
  if (script_.empty()) {
    script_ = workdir_ + "/solve.py";
    write_file(script_, kSolverScript);
  }
}

SubprocessSolver::~SubprocessSolver() {
  std::error_code ec;
  std::filesystem::remove_all(workdir_, ec);
}

bool SubprocessSolver::available() const {
  if (probe_ < 0) {
    std::string cmd = python_ + " -c 'import numpy, scipy.optimize' >/dev/null 2>&1";
    probe_ = (std::system(cmd.c_str()) == 0) ? 1 : 0;
  }
  return probe_ == 1;
}

std::vector<std::vector<SolveResult>> SubprocessSolver::solve_batch(
    const std::vector<Batch>& batch, const SolveOptions& opts) {
  if (batch.empty()) return {};
  for (const auto& b : batch)
    if (!b.model || b.model->num_variables() == 0)
      throw ModelError("solve_batch needs a model with at least one variable");
  if (!available())
    return all_errors(batch, "solver backend unavailable: " + python_ +
                                 " lacks numpy/scipy (set CCUSPLAN_PYTHON or install them)");

  json problems = json::array();
  for (const auto& b : batch) {
    json jobs = json::array();
    for (const SolveJob& j : b.jobs) {
      json fix = json::array();
      for (const BoundFix& f : j.fixes) {
        b.model->variable(f.var); // validates the handle
        fix.push_back({f.var.index, clip_inf(f.lower), clip_inf(f.upper)});
      }
      json obj = json::array();
      for (const ObjectiveOverride& o : j.objective) {
        b.model->variable(o.var);
        obj.push_back({o.var.index, o.coeff});
      }
      jobs.push_back({{"fix", fix}, {"obj", obj}, {"relax", j.relax_integrality}});
    }
    problems.push_back({{"model", model_to_wire(*b.model)}, {"jobs", jobs}});
  }
  json request = {{"options",
                   {{"gap_tol", opts.gap_tol},
                    {"time_limit", opts.time_limit_s},
                    {"seed", opts.seed}}},
                  {"problems", problems}};

  std::string tag = std::to_string(call_count_.fetch_add(1));
  std::string in_path = workdir_ + "/in_" + tag + ".json";
  std::string out_path = workdir_ + "/out_" + tag + ".json";
  std::string err_path = workdir_ + "/err_" + tag + ".txt";
  write_file(in_path, request.dump());
  std::error_code ec;
  std::filesystem::remove(out_path, ec);

  std::string cmd =
      python_ + " " + script_ + " " + in_path + " " + out_path + " 2>" + err_path;
  int rc = std::system(cmd.c_str());
  if (rc != 0 || !std::filesystem::exists(out_path)) {
    std::string err;
    try {
      err = read_file(err_path);
    } catch (const ModelError&) {
    }
    return all_errors(batch, "solver subprocess failed (exit " + std::to_string(rc) +
                                 "): " + err);
  }

  json reply;
  try {
    reply = json::parse(read_file(out_path));
  } catch (const std::exception& e) {
    return all_errors(batch, std::string("unreadable solver reply: ") + e.what());
  }

  std::vector<std::vector<SolveResult>> out;
  const json& results = reply.at("results");
  if (results.size() != batch.size())
    return all_errors(batch, "solver reply problem count mismatch");
  for (std::size_t i = 0; i < batch.size(); ++i) {
    std::vector<SolveResult> group;
    for (const json& r : results[i]) group.push_back(result_from_wire(r));
    std::size_t expect = batch[i].jobs.empty() ? 1 : batch[i].jobs.size();
    if (group.size() != expect)
      return all_errors(batch, "solver reply job count mismatch");
    out.push_back(std::move(group));
  }
  for (const std::string& f : {in_path, out_path, err_path}) std::filesystem::remove(f, ec);
  return out;
}

std::vector<std::vector<SolveResult>> NullSolver::solve_batch(
    const std::vector<Batch>& batch, const SolveOptions&) {
  return all_errors(batch, "solver backend disabled (CCUSPLAN_SOLVER_BACKEND=none)");
}

std::unique_ptr<Solver> make_solver() {
  std::string backend = getenv_or("CCUSPLAN_SOLVER_BACKEND", "scipy");
  if (backend == "none") return std::make_unique<NullSolver>();
  if (backend != "scipy")
    throw ModelError("unknown CCUSPLAN_SOLVER_BACKEND: " + backend);
  return std::make_unique<SubprocessSolver>();
}

} // namespace ccusplan::milp
