import { createApp } from './app.js';
import { WsTransport } from './client.js';
import { RealtimeBody } from './realtime.js';
import { ServerEvent, parseEvent } from './protocol.js';

const SAMPLE = `qnode bell() on device(wires=2) {
    h(0);
    cnot(0, 1);
    return probs(0, 1);
}

bell();
`;

async function postRealtime(body: RealtimeBody): Promise<ServerEvent> {
  const resp = await fetch('/realtime', {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify(body),
  });
  return parseEvent(await resp.text());
}

const host = document.getElementById('app');
if (!host) throw new Error('missing #app element');

const scheme = location.protocol === 'https:' ? 'wss' : 'ws';
createApp(host, {
  transport: new WsTransport(`${scheme}://${location.host}/session`),
  post: postRealtime,
  source: SAMPLE,
});
