// Copyright 2026 The clustask Authors
// SPDX-License-Identifier: Apache-2.0

#include "clustask/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace clustask {

double distance(Position a, Position b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void TaskSpec::validate() const {
  if (required.empty()) throw std::invalid_argument("task requires no capabilities");
  if (quorum < 1) throw std::invalid_argument("task quorum must be at least 1");
  if (!(duration_s > 0.0)) throw std::invalid_argument("task duration must be positive");
}

std::string_view toString(TaskStatus s) noexcept {
  switch (s) {
    case TaskStatus::Pending:
      return "pending";
    case TaskStatus::Dispatched:
      return "dispatched";
    case TaskStatus::Completed:
      return "completed";
  }
  return "unknown";
}

void Task::markDispatched(double now) {
  if (status != TaskStatus::Pending) {
    throw std::logic_error("task " + std::to_string(spec.id.value) + " dispatched while " +
                           std::string(toString(status)));
  }
  status = TaskStatus::Dispatched;
  dispatch_time_s = now;
}

void Task::revertToPending() {
  if (status != TaskStatus::Dispatched) {
    throw std::logic_error("only a dispatched task can return to pending");
  }
  if (!accept_times_s.empty()) {
    throw std::logic_error("an accepted task cannot return to pending");
  }
  status = TaskStatus::Pending;
  dispatch_time_s.reset();
}

Task taskComplete(Task task, double now) {
  if (task.status != TaskStatus::Dispatched || task.accept_times_s.empty()) {
    throw std::logic_error("task " + std::to_string(task.spec.id.value) +
                           " completed without an accept");
  }
  const double due = task.accept_times_s.front().second + task.spec.duration_s;
  if (now != due) {
    throw std::logic_error("task " + std::to_string(task.spec.id.value) +
                           " completed at the wrong time");
  }
  task.status = TaskStatus::Completed;
  return task;
}

}  // namespace clustask
