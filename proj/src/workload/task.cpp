#include "deepedge/workload/task.hpp"

#include <stdexcept>
#include <string>

namespace deepedge::workload {

std::string_view to_string(TaskOutcome outcome) {
    switch (outcome) {
    case TaskOutcome::Pending: return "pending";
    case TaskOutcome::Success: return "success";
    case TaskOutcome::FailCapacity: return "fail_capacity";
    case TaskOutcome::FailDeadline: return "fail_deadline";
    case TaskOutcome::FailMobility: return "fail_mobility";
    }
    return "unknown";
}

void Task::finish(TaskOutcome result) {
    if (outcome_ != TaskOutcome::Pending || result == TaskOutcome::Pending) {
        throw std::logic_error("task " + std::to_string(task_id) + " outcome already written");
    }
    outcome_ = result;
}

} // namespace deepedge::workload
