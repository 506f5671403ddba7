/** Browser entry point: build the client against the same origin and boot. */

import { ApiClient } from "./api.js";
import { App } from "./app.js";

const api = new ApiClient("", (input, init) => fetch(input, init));
const app = new App(api, document, window);

void app.start();
