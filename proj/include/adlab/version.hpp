#pragma once

#define ADLAB_VERSION "0.1.0"
