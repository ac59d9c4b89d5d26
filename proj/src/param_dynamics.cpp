#include "fractower/params.hpp"
