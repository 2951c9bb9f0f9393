#pragma once

#include "sentry/centre/batch.hpp"
#include "sentry/centre/config.hpp"

namespace sentry::centre {

/// Applies one scene directive; false when `d` is not a scene directive.
bool apply_scene_directive(SimScene& s, const Directive& d);
void validate_scene(const SimScene& s);

}  // namespace sentry::centre
