#include "geodloom/scene.hpp"
