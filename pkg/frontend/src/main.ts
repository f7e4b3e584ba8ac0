/** Browser entry point. */

import { mountConsole } from "./dom.js";
import { ConsoleSession } from "./session.js";
import { WsTransport } from "./wsTransport.js";

declare global {
  interface Window {
    __session: ConsoleSession;
  }
}

const params = new URLSearchParams(window.location.search);
const url = params.get("ws") ?? "ws://127.0.0.1:8766";

const transport = new WsTransport(url);
const session = new ConsoleSession(transport);
window.__session = session;
mountConsole(session, document.getElementById("console")!);
