#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>

#include <spdlog/spdlog.h>

#include "hyperdir/log.hpp"

int main(int argc, char** argv) {
  hyperdir::init_logging();
  if (std::getenv("HYPERDIR_LOG") == nullptr) spdlog::set_level(spdlog::level::err);
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
