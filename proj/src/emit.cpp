#include "geodloom/emit.hpp"
