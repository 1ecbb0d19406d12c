#pragma once

namespace hyperdir {

/// Routes logging to stderr at the level named by HYPERDIR_LOG
/// (trace, debug, info, warn, error, off; default warn).
void init_logging();

}  // namespace hyperdir
