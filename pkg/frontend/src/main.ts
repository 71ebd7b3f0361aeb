import { wire } from "./app.js";

window.addEventListener("DOMContentLoaded", wire);
